#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qsm/metrics.hpp"

namespace qsm {

enum class ImplementerKind { Unitary, Antiunitary };
enum class MapDomain { FullDensity, StatesOnly };
enum class NamedMap { Depolarizing, Pinching, TraceRescale };

std::string_view to_string(ImplementerKind k);
std::string_view to_string(MapDomain d);
std::string_view to_string(NamedMap m);
NamedMap named_map_from_string(std::string_view name);
MapDomain map_domain_from_string(std::string_view name);

using OracleFn = std::function<HermitianOperator(const HermitianOperator&)>;

/// A transformation of the density cone (or of the state space). Four
/// flavours: conjugation by a unitary, conjugation by an antiunitary U K (K
/// the entrywise conjugation), a named non-isometric channel, or an opaque
/// oracle. Values are immutable; oracles are shared by reference.
class StateMap {
 public:
  enum class Kind { UnitaryConj, AntiunitaryConj, Named, Oracle };

  static StateMap conjugation(ImplementerKind kind, Unitary u,
                              MapDomain domain = MapDomain::FullDensity);
  static StateMap oracle(int n, OracleFn fn, MapDomain domain, std::string label,
                         bool concurrent_safe = true);
  /// A <-> A for every A.
  static StateMap identity(int n, MapDomain domain = MapDomain::FullDensity);
  /// A <-> A^T, which is conjugation by the antiunitary K.
  static StateMap transpose(int n, MapDomain domain = MapDomain::FullDensity);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  MapDomain domain() const { return domain_; }
  const std::string& label() const { return label_; }
  bool concurrent_safe() const { return concurrent_safe_; }

  /// Implementing operator for the two conjugation kinds.
  const Unitary* implementer() const { return implementer_ ? &*implementer_ : nullptr; }
  std::optional<NamedMap> named() const { return named_; }
  double parameter() const { return parameter_; }

  /// Same action, different declared domain.
  StateMap with_domain(MapDomain domain) const;
  /// The map hidden behind an opaque oracle interface.
  StateMap as_oracle(std::string label = "oracle") const;

  DensityOperator operator()(const DensityOperator& a) const;

 private:
  friend StateMap named_nonisometry(NamedMap id, int n, double parameter,
                                    std::optional<Unitary> basis);
  StateMap() = default;
  friend DensityOperator apply_map(const StateMap& m, const DensityOperator& a);

  HermitianOperator evaluate(const HermitianOperator& a) const;

  Kind kind_ = Kind::Oracle;
  int dim_ = 0;
  MapDomain domain_ = MapDomain::FullDensity;
  std::string label_;
  bool concurrent_safe_ = true;
  std::optional<Unitary> implementer_;
  std::optional<NamedMap> named_;
  double parameter_ = 0.0;
  std::shared_ptr<const OracleFn> oracle_;
};

/// Depolarizing(p): A -> (1 - p) A + p tr(A) I / n, p in [0, 1].
/// Pinching(basis): A -> sum_k P_k A P_k over the basis projections
/// (computational basis when none is given).
/// TraceRescale(c): A -> c A, c > 0.
StateMap named_nonisometry(NamedMap id, int n, double parameter = 0.0,
                           std::optional<Unitary> basis = std::nullopt);

/// Evaluates the map. Inputs outside the declared domain raise DomainError,
/// as do outputs that leave the density cone by more than 1e-12 (1 + |tr|)
/// or, for state maps, leave unit trace by more than 1e-10.
DensityOperator apply_map(const StateMap& m, const DensityOperator& a);

/// Random pair from the map's domain: pure pairs, orthogonal pairs and
/// generic mixed pairs in equal proportion.
std::pair<DensityOperator, DensityOperator> sample_domain_pair(MapDomain domain, int n,
                                                               RngStream& rng);
DensityOperator sample_domain_element(MapDomain domain, int n, RngStream& rng);

struct IsometryReport {
  MetricKind metric;
  int pairs_tested = 0;
  double max_deviation = 0.0;
  DensityOperator worst_a;
  DensityOperator worst_b;
  std::uint64_t seed = 0;
  bool ran_concurrently = false;
};

/// max |d(phi(A), phi(B)) - d(A, B)| over sampled pairs. Pair k is drawn
/// from rng.substream(k), so the result does not depend on scheduling.
IsometryReport check_isometry(const StateMap& m, MetricKind metric, const RngStream& rng,
                              int pairs);

/// d(phi(0), 0).
double zero_image_distance(const StateMap& m, MetricKind metric);
bool zero_fixed_check(const StateMap& m, MetricKind metric, double tol);

/// max |tr phi(A) - tr A| over sampled densities.
double max_trace_gap(const StateMap& m, const RngStream& rng, int samples);
bool trace_preservation_check(const StateMap& m, const RngStream& rng, int samples, double tol);

struct PropertyCheck {
  std::string name;
  int instances = 0;
  double max_violation = 0.0;
  bool pass = true;
};

struct PreservationReport {
  std::vector<PropertyCheck> checks;
  bool all_pass() const;
  const PropertyCheck* find(std::string_view name) const;
};

/// Orthogonality (both directions), rank and affinity on sampled instances,
/// plus phi(0) = 0 and trace preservation for maps on the full density cone.
PreservationReport preservation_suite(const StateMap& m, const RngStream& rng, int samples = 100,
                                      double tol = 1e-8);

struct ReconstructionSettings {
  double purity_tol = 1e-8;
  double accept_tol = 1e-6;
  int validation_states = 100;
};

struct ReconstructionResult {
  Unitary u;
  ImplementerKind kind;
  /// max d_1(oracle(A), U A U*) (or U conj(A) U*) over the validation states.
  double residual = 0.0;
  std::string phase_convention;
  int probes = 0;
  int validation_states = 0;

  StateMap as_map(MapDomain domain = MapDomain::StatesOnly) const;
};

/// Recovers U and the unitary/antiunitary flag from a black-box isometry of
/// the state space by probing basis projections, real superpositions
/// (e_1 + e_i)/sqrt2 and the complex superposition (e_1 + i e_2)/sqrt2.
/// A map on the full density cone must first fix 0 and preserve the trace;
/// it is then probed on states only.
///
/// Raises NotIsometryEvidence when a pure probe does not come back pure (or
/// the cone-level checks fail) and NotImplementable when the validation
/// residual exceeds settings.accept_tol.
ReconstructionResult reconstruct_implementer(const StateMap& oracle, const RngStream& rng,
                                             const ReconstructionSettings& settings = {});

/// |tr(U_rec* U_true)| / n.
double phase_invariant_overlap(const Unitary& recovered, const Unitary& truth);

struct RoundtripReport {
  ImplementerKind true_kind;
  int dim = 0;
  Unitary truth;
  std::optional<ReconstructionResult> reconstruction;
  std::string failure;
  double bures_deviation = 0.0;
  double trace_deviation = 0.0;
  bool preservation_pass = false;
  double fresh_residual = 0.0;
  double overlap = 0.0;
  bool kind_match = false;
  bool pass = false;
};

struct RoundtripSettings {
  int isometry_pairs = 1000;
  int preservation_samples = 100;
  int fresh_states = 100;
  double isometry_tol = 1e-8;
  double residual_tol = 1e-6;
  double overlap_tol = 1e-8;
};

/// Samples a Haar U, hides U (or U K) behind an oracle and runs the isometry
/// checks, the preservation suite and the reconstruction against it.
RoundtripReport theorem_roundtrip(ImplementerKind kind, int n, MapDomain domain,
                                  const RngStream& rng, const RoundtripSettings& settings = {});

}  // namespace qsm
