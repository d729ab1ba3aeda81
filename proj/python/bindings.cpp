#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qsm/geometry.hpp"
#include "qsm/isomaps.hpp"
#include "qsm/suites.hpp"

namespace py = pybind11;
using namespace qsm;

namespace {

DensityOperator density(const Matrix& m) { return DensityOperator(HermitianOperator(m)); }

StateMap python_oracle(py::function fn, int dim, const std::string& domain) {
  OracleFn wrapped = [fn](const HermitianOperator& a) {
    py::gil_scoped_acquire gil;
    return HermitianOperator(fn(a.matrix()).cast<Matrix>());
  };
  // Python callables hold the GIL, so evaluation stays on one thread.
  return StateMap::oracle(dim, std::move(wrapped), map_domain_from_string(domain), "python", false);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Metric geometry of quantum states";

  py::register_exception<Error>(m, "QsmError");

  m.def("fidelity", [](const Matrix& a, const Matrix& b) { return fidelity(density(a), density(b)); },
        py::arg("a"), py::arg("b"));
  m.def("bures_distance",
        [](const Matrix& a, const Matrix& b) { return bures_distance(density(a), density(b)); },
        py::arg("a"), py::arg("b"));
  m.def("trace_distance",
        [](const Matrix& a, const Matrix& b) {
          return trace_distance(HermitianOperator(a), HermitianOperator(b));
        },
        py::arg("a"), py::arg("b"));
  m.def("are_orthogonal",
        [](const Matrix& a, const Matrix& b, double tol) { return are_orthogonal(density(a), density(b), tol); },
        py::arg("a"), py::arg("b"), py::arg("tol") = kDefaultOrthogonalityTol);

  m.def("eigh",
        [](const Matrix& a) {
          const Spectrum s = hermitian_eig(HermitianOperator(a));
          return py::make_tuple(RealVector(s.eigenvalues), Matrix(s.eigenvectors));
        },
        py::arg("a"), "Ascending eigenvalues and column eigenvectors of a self-adjoint matrix.");
  m.def("sqrtm", [](const Matrix& a) { return Matrix(matrix_sqrt(HermitianOperator(a)).matrix()); },
        py::arg("a"));

  m.def("random_unitary",
        [](int n, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return Matrix(random_unitary(n, rng).matrix());
        },
        py::arg("n"), py::arg("seed") = 1, py::arg("stream") = 0);
  m.def("random_density",
        [](int n, int rank, double trace, std::uint64_t seed, std::uint64_t stream) {
          RngStream rng(seed, stream);
          return Matrix(random_density(n, rank, trace, rng).matrix());
        },
        py::arg("n"), py::arg("rank"), py::arg("trace") = 1.0, py::arg("seed") = 1,
        py::arg("stream") = 0);

  m.def("reconstruct",
        [](py::function oracle, int dim, const std::string& domain, std::uint64_t seed, double accept_tol) {
          ReconstructionSettings settings;
          settings.accept_tol = accept_tol;
          const ReconstructionResult r =
              reconstruct_implementer(python_oracle(std::move(oracle), dim, domain), RngStream(seed), settings);
          py::dict out;
          out["U"] = Matrix(r.u.matrix());
          out["kind"] = std::string(to_string(r.kind));
          out["residual"] = r.residual;
          out["probes"] = r.probes;
          return out;
        },
        py::arg("oracle"), py::arg("dim"), py::arg("domain") = "states", py::arg("seed") = 1,
        py::arg("accept_tol") = 1e-6,
        "Recover U and the unitary/antiunitary flag from a callable mapping matrices to matrices.");

  m.def("check_isometry",
        [](py::function oracle, int dim, const std::string& metric, int pairs, std::uint64_t seed,
           const std::string& domain) {
          return check_isometry(python_oracle(std::move(oracle), dim, domain), metric_from_string(metric),
                                RngStream(seed), pairs)
              .max_deviation;
        },
        py::arg("oracle"), py::arg("dim"), py::arg("metric") = "bures", py::arg("pairs") = 100,
        py::arg("seed") = 1, py::arg("domain") = "density",
        "Largest |d(phi A, phi B) - d(A, B)| over sampled pairs.");

  m.def("suite_ids", &suite_ids);
  m.def("run_verification",
        [](const std::string& id, const std::vector<int>& dims, std::uint64_t seed, int samples, int budget) {
          SuiteConfig cfg;
          cfg.seed = seed;
          cfg.samples = samples;
          cfg.budget = budget;
          return run_verification(id, dims, cfg).dump();
        },
        py::arg("suite"), py::arg("dims"), py::arg("seed") = 1, py::arg("samples") = 200,
        py::arg("budget") = 10000, "Runs a verification suite and returns the JSON report text.");
}
