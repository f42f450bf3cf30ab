#include <cstdlib>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mdm/channel.hpp"
#include "mdm/eigensolver.hpp"
#include "mdm/errors.hpp"
#include "mdm/gaussianity.hpp"
#include "mdm/oracle.hpp"
#include "mdm/r_operators.hpp"
#include "mdm/schmidt.hpp"
#include "mdm/tradeoff.hpp"

namespace py = pybind11;
using namespace mdm;

namespace {

TradeoffOptions make_options(std::size_t l_max, double tol, std::size_t max_iter,
                             std::size_t retry_factor, bool verify_blocks, unsigned threads) {
  TradeoffOptions options;
  options.l_max = l_max;
  options.scan.eig = {tol, max_iter};
  options.scan.verify_blocks = verify_blocks;
  options.retry_factor = retry_factor;
  options.threads = threads;
  return options;
}

std::vector<double> to_vector(const SchmidtState& state) {
  return {state.coeffs().begin(), state.coeffs().end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Optimal output/estimation fidelity trade-off for coherent states";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<RangeError>(m, "RangeError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

  py::class_<SchmidtState>(m, "SchmidtState")
      .def(py::init([](std::vector<double> coeffs) {
             return SchmidtState::from_coefficients(std::move(coeffs));
           }),
           py::arg("coeffs"))
      .def_static("normalized", &SchmidtState::normalized, py::arg("coeffs"))
      .def_static("vacuum", &SchmidtState::vacuum, py::arg("dim") = 1)
      .def_property_readonly("coeffs", &to_vector)
      .def_property_readonly("dim", &SchmidtState::dim)
      .def("padded", &SchmidtState::padded, py::arg("new_dim"))
      .def("__len__", &SchmidtState::dim)
      .def("__getitem__",
           [](const SchmidtState& s, std::size_t n) {
             if (n >= s.dim()) throw py::index_error();
             return s[n];
           })
      .def("__repr__", [](const SchmidtState& s) {
        return "SchmidtState(dim=" + std::to_string(s.dim()) + ")";
      });

  m.def("tmsv", [](double lambda, std::size_t dim) {
    auto t = tmsv(lambda, dim);
    return py::make_tuple(t.state, t.leakage);
  }, py::arg("lam"), py::arg("dim"), "Two-mode squeezed vacuum; returns (state, leakage).");
  m.def("photon_subtracted", [](double x, std::size_t dim) {
    auto t = photon_subtracted(x, dim);
    return py::make_tuple(t.state, t.leakage);
  }, py::arg("x"), py::arg("dim"), "Photon-subtracted TMSV; returns (state, leakage).");

  m.def("fidelity_output", py::overload_cast<const SchmidtState&>(&fidelity_output),
        py::arg("state"));
  m.def("fidelity_estimation", &fidelity_estimation, py::arg("state"));
  m.def("save_state", [](const SchmidtState& s, const std::filesystem::path& path) {
    save_state(s, path);
  }, py::arg("state"), py::arg("path"));
  m.def("load_state", &load_state, py::arg("path"));

  py::class_<FidelityPair>(m, "FidelityPair")
      .def_readonly("F", &FidelityPair::F)
      .def_readonly("G", &FidelityPair::G)
      .def("__iter__", [](const FidelityPair& f) {
        return py::iter(py::make_tuple(f.F, f.G));
      });
  m.def("bk_fidelities", &bk_fidelities, py::arg("r"));
  m.def("gaussian_tradeoff_g", &gaussian_tradeoff_g, py::arg("F"));
  m.def("photon_subtracted_fidelities", &photon_subtracted_fidelities, py::arg("x"));

  m.def("build_r", [](double p, int L, std::size_t dim) {
    const auto table = LogFactorialTable::for_blocks(dim, static_cast<std::size_t>(std::abs(L)));
    return build_r(p, L, dim, table).entries;
  }, py::arg("p"), py::arg("L"), py::arg("dim"), "Block L of R(p) as a dense matrix.");

  py::class_<BlockEigenvalue>(m, "BlockEigenvalue")
      .def_readonly("L", &BlockEigenvalue::L)
      .def_readonly("eigenvalue", &BlockEigenvalue::eigenvalue)
      .def_readonly("iterations", &BlockEigenvalue::iterations)
      .def_readonly("residual", &BlockEigenvalue::residual);

  py::class_<BlockScanResult>(m, "BlockScanResult")
      .def_readonly("p", &BlockScanResult::p)
      .def_readonly("blocks", &BlockScanResult::blocks)
      .def_readonly("L_star", &BlockScanResult::L_star)
      .def_readonly("lambda_max", &BlockScanResult::lambda_max)
      .def_readonly("degeneracy_ratio", &BlockScanResult::degeneracy_ratio)
      .def_readonly("optimal_state", &BlockScanResult::optimal_state)
      .def_readonly("total_iterations", &BlockScanResult::total_iterations);

  m.def("block_scan",
        [](double p, std::size_t dim, std::size_t l_max, double tol, std::size_t max_iter,
           bool verify_blocks) {
          return block_scan(p, dim, l_max, {{tol, max_iter}, verify_blocks});
        },
        py::arg("p"), py::arg("dim"), py::arg("l_max") = 30, py::arg("tol") = 1e-12,
        py::arg("max_iter") = 100000, py::arg("verify_blocks") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("small_n_crosscheck", &small_n_crosscheck, py::arg("p"), py::arg("dim"));

  py::class_<TradeoffPoint>(m, "TradeoffPoint")
      .def_readonly("p", &TradeoffPoint::p)
      .def_readonly("lambda_max", &TradeoffPoint::lambda_max)
      .def_readonly("F", &TradeoffPoint::F)
      .def_readonly("G", &TradeoffPoint::G)
      .def_readonly("L_star", &TradeoffPoint::L_star)
      .def_readonly("dim", &TradeoffPoint::dim)
      .def_readonly("iterations", &TradeoffPoint::iterations)
      .def_readonly("degeneracy_ratio", &TradeoffPoint::degeneracy_ratio)
      .def_readonly("optimal_state", &TradeoffPoint::optimal_state)
      .def_readonly("retried", &TradeoffPoint::retried)
      .def_readonly("ok", &TradeoffPoint::ok)
      .def_readonly("error", &TradeoffPoint::error);

  m.def("scan_p",
        [](std::vector<double> grid, std::size_t dim, std::size_t l_max, double tol,
           std::size_t max_iter, std::size_t retry_factor, bool verify_blocks, unsigned threads) {
          return scan_p(grid, dim,
                        make_options(l_max, tol, max_iter, retry_factor, verify_blocks, threads));
        },
        py::arg("p_grid"), py::arg("dim"), py::arg("l_max") = 30, py::arg("tol") = 1e-12,
        py::arg("max_iter") = 100000, py::arg("retry_factor") = 10,
        py::arg("verify_blocks") = false, py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("delta_g", [](const std::vector<TradeoffPoint>& points) {
    std::vector<std::pair<double, double>> out;
    for (const auto& d : delta_g_curve(points)) out.emplace_back(d.F, d.delta_g);
    return out;
  }, py::arg("points"), "[(F, G - G_gauss(F))] for each point.");
  m.def("find_p_for_f",
        [](double f_target, std::size_t dim, std::size_t l_max) {
          TradeoffOptions options;
          options.l_max = l_max;
          return find_p_for_f(f_target, dim, options);
        },
        py::arg("f_target"), py::arg("dim"), py::arg("l_max") = 30,
        py::call_guard<py::gil_scoped_release>());
  m.def("max_output_fidelity", [](std::size_t dim) { return max_output_fidelity(dim); },
        py::arg("dim"));
  m.def("schmidt_delta", [](const SchmidtState& s, double f_match) {
    std::vector<std::tuple<std::size_t, double, double, double>> out;
    for (const auto& r : schmidt_delta(s, f_match)) out.emplace_back(r.n, r.c, r.c_tmsv, r.delta);
    return out;
  }, py::arg("state"), py::arg("f_match"), "[(n, c_n, c_tmsv, delta)] rows.");

  py::enum_<GaussianityVerdict>(m, "GaussianityVerdict")
      .value("consistent_with_gaussian", GaussianityVerdict::ConsistentWithGaussian)
      .value("non_gaussian", GaussianityVerdict::NonGaussian)
      .value("inconclusive", GaussianityVerdict::Inconclusive);
  py::class_<GaussianityReport>(m, "GaussianityReport")
      .def_readonly("a", &GaussianityReport::a)
      .def_readonly("c", &GaussianityReport::c)
      .def_readonly("witness", &GaussianityReport::witness)
      .def_readonly("lambda_nearest", &GaussianityReport::lambda_nearest)
      .def_readonly("leakage", &GaussianityReport::leakage)
      .def_readonly("verdict", &GaussianityReport::verdict);
  m.def("gaussianity_witness", &gaussianity_witness, py::arg("state"),
        py::arg("leakage") = py::none());

  py::class_<GaussChannelResult>(m, "GaussChannelResult")
      .def_readonly("f_gauss", &GaussChannelResult::f_gauss)
      .def_readonly("r_star", &GaussChannelResult::r_star)
      .def_readonly("cap_hit", &GaussChannelResult::cap_hit);
  m.def("gauss_channel_fidelity", &gauss_channel_fidelity, py::arg("p"),
        py::arg("r_cap") = kDefaultSqueezingCap);
  py::class_<ChannelPoint>(m, "ChannelPoint")
      .def_readonly("p", &ChannelPoint::p)
      .def_readonly("f_av", &ChannelPoint::f_av)
      .def_readonly("f_gauss", &ChannelPoint::f_gauss)
      .def_readonly("r_star", &ChannelPoint::r_star)
      .def_readonly("cap_flag", &ChannelPoint::cap_flag)
      .def_readonly("f_opt", &ChannelPoint::f_opt)
      .def_readonly("delta_f", &ChannelPoint::delta_f)
      .def_readonly("artifact_flag", &ChannelPoint::artifact_flag)
      .def_readonly("ok", &ChannelPoint::ok);
  m.def("channel_point", &channel_point, py::arg("p"), py::arg("lambda_max"));
  m.def("best_strategy", [](double p, double f_gauss, double f_opt) {
    return std::string(to_string(best_strategy(p, f_gauss, f_opt)));
  }, py::arg("p"), py::arg("f_gauss"), py::arg("f_opt"));

  py::class_<OracleFidelities>(m, "OracleFidelities")
      .def_readonly("F", &OracleFidelities::F)
      .def_readonly("G", &OracleFidelities::G)
      .def_readonly("precision_warning", &OracleFidelities::precision_warning);
  m.def("oracle_fidelities",
        py::overload_cast<const SchmidtState&, std::size_t>(&oracle_fidelities),
        py::arg("state"), py::arg("order"));
  py::class_<McFidelities>(m, "McFidelities")
      .def_readonly("F", &McFidelities::F)
      .def_readonly("F_stderr", &McFidelities::F_stderr)
      .def_readonly("G", &McFidelities::G)
      .def_readonly("G_stderr", &McFidelities::G_stderr);
  m.def("mc_fidelities", &mc_fidelities, py::arg("state"), py::arg("samples"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
}
