#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "freelunch/cli.hpp"
#include "freelunch/convergence.hpp"
#include "freelunch/errors.hpp"
#include "freelunch/lattice.hpp"
#include "freelunch/lunch.hpp"
#include "freelunch/rng.hpp"
#include "freelunch/version.hpp"

namespace py = pybind11;
using namespace freelunch;

PYBIND11_MODULE(_core, m) {
  m.doc() = "random-walk market free-lunch toolkit";
  m.attr("__version__") = kVersion;
  m.attr("PRNG_ID") = kPrngId;

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<QuadratureFailure>(m, "QuadratureFailure", PyExc_RuntimeError);
  py::register_exception<EnumerationTooLarge>(m, "EnumerationTooLarge",
                                              PyExc_RuntimeError);
  py::register_exception<HypothesisViolated>(m, "HypothesisViolated",
                                             PyExc_RuntimeError);

  py::class_<Rng>(m, "Rng").def(py::init<std::uint64_t>());
  m.def("substream_seed", &substream_seed);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("brownian_constant", &KernelSpec::brownian_constant)
      .def_static("fbm_moving_average", &KernelSpec::fbm_moving_average)
      .def_static("fbm_sottinen", &KernelSpec::fbm_sottinen)
      .def_static("ornstein_uhlenbeck", &KernelSpec::ornstein_uhlenbeck)
      .def_static("rogers", &KernelSpec::rogers)
      .def_static("mixed_bm", &KernelSpec::mixed_bm)
      .def_static("tabulated", &KernelSpec::tabulated)
      .def("kappa", &KernelSpec::kappa)
      .def("eval", &KernelSpec::eval)
      .def("deriv_t", &KernelSpec::deriv_t)
      .def("total_variation", &KernelSpec::total_variation)
      .def("square_integral", &KernelSpec::square_integral)
      .def("kappa_zero_limit", &KernelSpec::kappa_zero_limit)
      .def("kappa_infinity_limit", &KernelSpec::kappa_infinity_limit)
      .def("changes_sign", &KernelSpec::changes_sign)
      .def("is_difference_kernel", &KernelSpec::is_difference_kernel)
      .def("name", &KernelSpec::name);

  py::class_<InnovationLaw>(m, "InnovationLaw")
      .def_static("rademacher", &InnovationLaw::rademacher)
      .def_static("two_point", &InnovationLaw::two_point)
      .def_static("from_atoms", &InnovationLaw::from_atoms)
      .def("atoms",
           [](const InnovationLaw& law) {
             std::vector<std::pair<double, double>> out;
             for (const auto& a : law.atoms()) out.emplace_back(a.value, a.prob);
             return out;
           })
      .def("__len__", &InnovationLaw::size)
      .def("M", &InnovationLaw::M)
      .def("m", &InnovationLaw::m)
      .def("mean", &InnovationLaw::mean)
      .def("second_moment", &InnovationLaw::second_moment)
      .def("variance", &InnovationLaw::variance)
      .def("sample", &InnovationLaw::sample);

  py::class_<GridSpec>(m, "GridSpec")
      .def_static("make", &GridSpec::make)
      .def_readonly("n", &GridSpec::n)
      .def_readonly("t0", &GridSpec::t0)
      .def_readonly("T", &GridSpec::T)
      .def("j0", &GridSpec::j0)
      .def("time_at", &GridSpec::time_at)
      .def("last_index", &GridSpec::last_index)
      .def("size", &GridSpec::size);

  py::class_<PriceMap>(m, "PriceMap")
      .def_static("identity", &PriceMap::identity)
      .def_static("exponential", &PriceMap::exponential)
      .def_static("custom", &PriceMap::custom)
      .def("__call__", &PriceMap::operator());

  py::enum_<XGrouping>(m, "XGrouping")
      .value("ProofBracket", XGrouping::ProofBracket)
      .value("PrintedBracket", XGrouping::PrintedBracket);

  py::class_<MarketSpec>(m, "MarketSpec")
      .def(py::init<KernelSpec, InnovationLaw>())
      .def(py::init<KernelSpec, LawProvider>())
      .def_readonly("kernel", &MarketSpec::kernel)
      .def_readwrite("lambda_", &MarketSpec::lambda)
      .def_readwrite("price_map", &MarketSpec::price_map)
      .def_readwrite("x_grouping", &MarketSpec::x_grouping)
      .def_readwrite("holder_exponent", &MarketSpec::holder_exponent)
      .def("set_drift",
           [](MarketSpec& mkt, std::function<double(double)> f) { mkt.drift = f; })
      .def("set_past",
           [](MarketSpec& mkt, std::function<double(double)> f) { mkt.past = f; })
      .def("law", [](const MarketSpec& mkt, long n) { return mkt.law(n); });

  py::class_<PathDecomposition>(m, "PathDecomposition")
      .def_readonly("j", &PathDecomposition::j)
      .def_readonly("x", &PathDecomposition::x)
      .def_readonly("y_coeffs", &PathDecomposition::y_coeffs)
      .def_readonly("z_coeff", &PathDecomposition::z_coeff);

  m.def("decompose", &decompose);
  m.def("kernel_on_grid", &kernel_on_grid);
  m.def("single_period_return", &single_period_return);
  m.def("simulate_path", [](const MarketSpec& mkt, const GridSpec& grid, Rng& rng) {
    const MarketPath p = simulate_path(mkt, grid, rng);
    py::dict out;
    out["times"] = p.times;
    out["z"] = p.z;
    out["a"] = p.a;
    out["s"] = p.s;
    out["xi"] = p.xi;
    return out;
  });

  py::enum_<Verdict>(m, "Verdict")
      .value("NONE", Verdict::None)
      .value("BOUNDARY", Verdict::ArbitrageAtBoundary)
      .value("STRICT", Verdict::ArbitrageStrict);
  m.def("verdict_name", &verdict_name);

  py::class_<ArbitrageCertificate>(m, "ArbitrageCertificate")
      .def_readonly("j_star", &ArbitrageCertificate::j_star)
      .def_readonly("lambda_", &ArbitrageCertificate::lambda)
      .def_readonly("lambda_bar", &ArbitrageCertificate::lambda_bar)
      .def_readonly("esssup_xy", &ArbitrageCertificate::esssup_xy)
      .def_readonly("essinf_z", &ArbitrageCertificate::essinf_z)
      .def_readonly("witness", &ArbitrageCertificate::witness)
      .def_readonly("verdict", &ArbitrageCertificate::verdict);

  py::class_<StepReport>(m, "StepReport")
      .def_readonly("j", &StepReport::j)
      .def_readonly("lambda_bar", &StepReport::lambda_bar)
      .def_readonly("esssup_xy", &StepReport::esssup_xy)
      .def_readonly("essinf_z", &StepReport::essinf_z)
      .def_readonly("verdict", &StepReport::verdict);

  m.def("best_history_atom", &best_history_atom);
  m.def("worst_innovation_atom", &worst_innovation_atom);
  m.def("esssup_xy", [](const MarketSpec& mkt, const GridSpec& grid, long j) {
    const EsssupXY r = esssup_xy(mkt, grid, j);
    return py::make_tuple(r.value, r.witness);
  });
  m.def("lambda_bar", &lambda_bar);
  m.def("classify_step", &classify_step);
  m.def("search_arbitrage", &search_arbitrage);

  py::class_<IntegralCriterion>(m, "IntegralCriterion")
      .def_readonly("lhs", &IntegralCriterion::lhs)
      .def_readonly("rhs", &IntegralCriterion::rhs)
      .def_readonly("j_star", &IntegralCriterion::j_star)
      .def_readonly("epsilon_bar", &IntegralCriterion::epsilon_bar)
      .def_readonly("holds", &IntegralCriterion::holds)
      .def_readonly("sell_after_horizon", &IntegralCriterion::sell_after_horizon);
  m.def("integral_criterion", &integral_criterion);
  m.def("symmetric_criterion", &symmetric_criterion, py::arg("market"), py::arg("grid"),
        py::arg("T"), py::arg("literal_tail") = false);

  py::class_<AsymptoticReport>(m, "AsymptoticReport")
      .def_readonly("n_sequence", &AsymptoticReport::n_sequence)
      .def_readonly("min_abs_kappa_inv_n", &AsymptoticReport::min_abs_kappa_inv_n)
      .def_readonly("kappa_changes_sign", &AsymptoticReport::kappa_changes_sign)
      .def_readonly("total_variation", &AsymptoticReport::total_variation)
      .def_readonly("min_finite_bound", &AsymptoticReport::min_finite_bound)
      .def_readonly("symbolic_liminf_abs", &AsymptoticReport::symbolic_liminf_abs)
      .def_readonly("symbolic_bound", &AsymptoticReport::symbolic_bound)
      .def_readonly("condition1", &AsymptoticReport::condition1)
      .def_readonly("condition2", &AsymptoticReport::condition2)
      .def_readonly("arbitrage_for_large_n", &AsymptoticReport::arbitrage_for_large_n)
      .def_readonly("conclusion", &AsymptoticReport::conclusion);
  m.def("check_asymptotic_arbitrage", &check_asymptotic_arbitrage, py::arg("kernel"), py::arg("law_provider"),
        py::arg("n_sequence"), py::arg("nu") = 0.0);

  m.def("min_arbitrage_steps_fbm", &min_arbitrage_steps_fbm, py::arg("hurst"),
        py::arg("point_mass"));

  py::class_<FlvrEntry>(m, "FlvrEntry")
      .def_readonly("j", &FlvrEntry::j)
      .def_readonly("ratio", &FlvrEntry::ratio)
      .def_readonly("expected_return", &FlvrEntry::expected_return)
      .def_readonly("epsilon", &FlvrEntry::epsilon);
  py::class_<FlvrReport>(m, "FlvrReport")
      .def_readonly("entries", &FlvrReport::entries)
      .def_readonly("achieved_delta", &FlvrReport::achieved_delta)
      .def_readonly("targets", &FlvrReport::targets)
      .def_readonly("x_all_nonnegative", &FlvrReport::x_all_nonnegative)
      .def_readonly("kappa_vanishes_at_infinity", &FlvrReport::kappa_vanishes_at_infinity);
  m.def("flvr_scan", &flvr_scan, py::arg("market"), py::arg("grid"), py::arg("j_max"),
        py::arg("delta_targets"), py::arg("nu") = 0.0);
  m.def("flvr_hypotheses", [](const MarketSpec& mkt, const GridSpec& grid, double nu) {
    std::string which;
    const bool ok = flvr_hypotheses(mkt, grid, nu, &which);
    return py::make_tuple(ok, which);
  }, py::arg("market"), py::arg("grid"), py::arg("nu") = 0.0);

  m.def("transaction_cost_bound", &transaction_cost_bound);

  py::class_<OracleResult>(m, "OracleResult")
      .def_readonly("max_worst_return", &OracleResult::max_worst_return)
      .def_readonly("history", &OracleResult::history)
      .def_readonly("essinf_innovation", &OracleResult::essinf_innovation);
  m.def("brute_force_oracle", &brute_force_oracle, py::arg("market"), py::arg("grid"),
        py::arg("j"), py::arg("lambda"), py::arg("cap") = std::uint64_t{10000000});
  m.def("expected_return_on_event", &expected_return_on_event);

  py::class_<ConvergenceRow>(m, "ConvergenceRow")
      .def_readonly("n", &ConvergenceRow::n)
      .def_readonly("t", &ConvergenceRow::t)
      .def_readonly("T", &ConvergenceRow::T)
      .def_readonly("discrete", &ConvergenceRow::discrete)
      .def_readonly("limit", &ConvergenceRow::limit)
      .def_readonly("abs_error", &ConvergenceRow::abs_error);
  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("kernel_id", &ConvergenceReport::kernel_id)
      .def_readonly("law_id", &ConvergenceReport::law_id)
      .def_readonly("rows", &ConvergenceReport::rows)
      .def_readonly("fitted_decay_exponent", &ConvergenceReport::fitted_decay_exponent);
  py::class_<McMomentCheck>(m, "McMomentCheck")
      .def_readonly("empirical_mean", &McMomentCheck::empirical_mean)
      .def_readonly("empirical_variance", &McMomentCheck::empirical_variance)
      .def_readonly("analytic_mean", &McMomentCheck::analytic_mean)
      .def_readonly("analytic_variance", &McMomentCheck::analytic_variance)
      .def_readonly("z_mean", &McMomentCheck::z_mean)
      .def_readonly("z_variance", &McMomentCheck::z_variance)
      .def_readonly("num_paths", &McMomentCheck::num_paths);
  m.def("covariance_discrete", &covariance_discrete);
  m.def("covariance_limit", &covariance_limit);
  m.def("convergence_table", &convergence_table);
  m.def("mc_moment_check", &mc_moment_check);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return py::make_tuple(code, out.str(), err.str());
  });
}
