#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "srkit/ctmc.hpp"
#include "srkit/errors.hpp"
#include "srkit/escape.hpp"
#include "srkit/kramers.hpp"
#include "srkit/measures.hpp"
#include "srkit/potential.hpp"
#include "srkit/sde.hpp"
#include "srkit/stats.hpp"
#include "srkit/sweep.hpp"

namespace py = pybind11;
using namespace srk;

namespace {

py::array_t<double> to_array(std::span<const double> v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

std::vector<double> to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return {a.data(), a.data() + a.size()};
}

PhaseFoldedSignal signal(double period, const py::array_t<double, py::array::c_style | py::array::forcecast>& v) {
  PhaseFoldedSignal s;
  s.period = period;
  s.values = to_vector(v);
  s.weights.assign(s.values.size(), 1.0);
  return s;
}

}  // namespace

PYBIND11_MODULE(_srkit, m) {
  m.doc() = "Stochastic resonance in a two-pathway double-well potential.";

  py::register_exception<Error>(m, "SrkError");
  py::register_exception<InvalidParams>(m, "InvalidParams", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double a, double b) {
             ModelParams p{a, b};
             p.validate();
             return p;
           }),
           py::arg("a") = 0.15, py::arg("b") = 0.1)
      .def_readwrite("a", &ModelParams::a)
      .def_readwrite("b", &ModelParams::b)
      .def("__repr__", [](const ModelParams& p) { return "ModelParams(a=" + std::to_string(p.a) + ", b=" + std::to_string(p.b) + ")"; });

  py::class_<Forcing>(m, "Forcing")
      .def(py::init([](double magnitude, double angle_deg, double omega) {
             Forcing f{magnitude, angle_deg, omega};
             f.validate();
             return f;
           }),
           py::arg("magnitude"), py::arg("angle_deg") = 0.0, py::arg("omega") = 1e-3)
      .def_readwrite("magnitude", &Forcing::magnitude)
      .def_readwrite("angle_deg", &Forcing::angle_deg)
      .def_readwrite("omega", &Forcing::omega)
      .def_property_readonly("period", &Forcing::period);

  m.def("potential", [](const ModelParams& p, double x, double y, double fx, double fy) {
    return eval_potential(p, {fx, fy}, {x, y});
  }, py::arg("params"), py::arg("x"), py::arg("y"), py::arg("fx") = 0.0, py::arg("fy") = 0.0);

  py::class_<CriticalForcing>(m, "CriticalForcing")
      .def_readonly("x_saddle", &CriticalForcing::x_saddle)
      .def_readonly("x_critical", &CriticalForcing::x_critical)
      .def_readonly("y_saddle", &CriticalForcing::y_saddle)
      .def_readonly("y_critical", &CriticalForcing::y_critical)
      .def("value", &CriticalForcing::value);
  m.def("critical_forcing", &critical_forcing, py::arg("params") = ModelParams{});

  m.def("critical_points", [](const ModelParams& p, double fx, double fy) {
    const CriticalSet s = find_critical_points(p, {fx, fy});
    py::dict out;
    for (const auto& [label, pt] : s.labelled()) {
      py::dict d;
      d["x"] = pt->position.x;
      d["y"] = pt->position.y;
      d["kind"] = std::string(to_string(pt->kind));
      d["V"] = pt->value;
      d["det_hessian"] = pt->hessian_det;
      d["lambda_min"] = pt->lambda_min;
      out[py::str(std::string(label))] = d;
    }
    return out;
  }, py::arg("params") = ModelParams{}, py::arg("fx") = 0.0, py::arg("fy") = 0.0);

  m.def("rate_table", [](const ModelParams& p, const Forcing& f, double eps, std::size_t n) {
    const RateTable t = adiabatic_rate_table(p, f, eps, n);
    return py::make_tuple(to_array(t.phases()), to_array(t.rates_lr()), to_array(t.rates_rl()));
  }, py::arg("params"), py::arg("forcing"), py::arg("epsilon"), py::arg("n_phase") = 1024,
        "Phases and the left-to-right / right-to-left Kramers rates over one period.");

  py::class_<TwoStateChain>(m, "TwoStateChain")
      .def(py::init([](double period, py::array_t<double> p, py::array_t<double> q) {
             return TwoStateChain(RatePair(PeriodicFunction(period, to_vector(p)), PeriodicFunction(period, to_vector(q))));
           }),
           py::arg("period"), py::arg("p"), py::arg("q"))
      .def_property_readonly("period", &TwoStateChain::period)
      .def("transient", [](const TwoStateChain& c, double nu_minus0, double t) {
             const auto s = c.transient({0.0, nu_minus0, 1.0 - nu_minus0}, t);
             return py::make_tuple(s.nu_minus, s.nu_plus);
           }, py::arg("nu_minus0"), py::arg("t"))
      .def("invariant_minus", &TwoStateChain::invariant_minus, py::arg("t"))
      .def("invariant_measure", [](const TwoStateChain& c, std::size_t n) {
             const auto im = c.invariant_measure(n);
             return py::make_tuple(to_array(im.grid), to_array(im.nu_minus_bar), to_array(im.nu_plus_bar));
           }, py::arg("n_grid"))
      .def("relaxation_time", [](const TwoStateChain& c, double nu_minus0) {
             return c.relaxation_time({0.0, nu_minus0, 1.0 - nu_minus0});
           }, py::arg("nu_minus0"));

  m.def("simulate", [](const ModelParams& p, const Forcing& f, double eps, double n_periods, double t_step,
                       std::uint64_t seed, std::uint64_t realization, std::size_t stride) {
    SimConfig c;
    c.params = p;
    c.forcing = f;
    c.epsilon = eps;
    c.n_periods = n_periods;
    c.t_step = t_step;
    c.seed = seed;
    c.record_stride = stride;
    TrajectoryRecord r;
    {
      py::gil_scoped_release release;
      r = simulate(c, realization);
    }
    return py::make_tuple(to_array(r.times), to_array(r.xs), to_array(r.ys));
  }, py::arg("params"), py::arg("forcing"), py::arg("epsilon"), py::arg("n_periods") = 1.0,
        py::arg("t_step") = 0.014, py::arg("seed") = 1, py::arg("realization") = 0, py::arg("stride") = 10);

  m.def("kolmogorov_cdf", &kolmogorov_cdf, py::arg("x"));
  m.def("ks_uniform", [](py::array_t<double> v) {
    const auto values = to_vector(v);
    const KSResult r = ks_uniform(values);
    return py::dict(py::arg("n") = r.n, py::arg("statistic") = r.statistic, py::arg("scaled") = r.scaled,
                    py::arg("q_value") = r.q_value, py::arg("accepted_99") = r.accepted_99);
  }, py::arg("values"));
  m.attr("KS_THRESHOLD_99") = kKsThreshold99;

  m.def("conditional_cdf", [](double period, py::array_t<double> rate, double u, double t) {
    const auto r = to_vector(rate);
    const RateTable table(period, r, r);
    return ConditionalEscapeDist(table, Direction::LeftToRight, u).cdf(t);
  }, py::arg("period"), py::arg("rate"), py::arg("u"), py::arg("t"),
        "CDF of the exit time from a well with periodic escape rate `rate` entered at u.");

  m.def("linear_response", [](double period, py::array_t<double> v) { return linear_response(signal(period, v)); },
        py::arg("period"), py::arg("values"));

  m.def("six_measures", [](double period, py::array_t<double> mean_y, py::array_t<double> mean_ybar,
                           py::array_t<double> nu_minus, py::array_t<double> nu_plus, double forcing, double eps) {
    const auto nm = to_vector(nu_minus);
    const auto np = to_vector(nu_plus);
    const SixMeasures s = six_measures(signal(period, mean_y), signal(period, mean_ybar), nm, np, forcing, eps);
    return py::dict(py::arg("m1") = s.m1, py::arg("m2") = s.m2, py::arg("m3") = s.m3, py::arg("m4") = s.m4,
                    py::arg("m5") = s.m5, py::arg("m6") = s.m6, py::arg("floor_used") = s.floor_used);
  }, py::arg("period"), py::arg("mean_y"), py::arg("mean_ybar"), py::arg("nu_minus"), py::arg("nu_plus"),
        py::arg("forcing"), py::arg("epsilon"));

  py::class_<SweepConfig>(m, "SweepConfig")
      .def(py::init<>())
      .def_static("paper", &SweepConfig::paper)
      .def_static("desk", &SweepConfig::desk)
      .def_static("from_text", &SweepConfig::from_text)
      .def("to_text", &SweepConfig::to_text)
      .def("validate", &SweepConfig::validate)
      .def("hash", &SweepConfig::hash)
      .def_readwrite("omega", &SweepConfig::omega)
      .def_readwrite("forcing_fraction", &SweepConfig::forcing_fraction)
      .def_readwrite("epsilons", &SweepConfig::epsilons)
      .def_readwrite("angles_deg", &SweepConfig::angles_deg)
      .def_readwrite("n_realizations", &SweepConfig::n_realizations)
      .def_readwrite("n_periods", &SweepConfig::n_periods)
      .def_readwrite("t_step", &SweepConfig::t_step)
      .def_readwrite("radius", &SweepConfig::radius)
      .def_readwrite("seed", &SweepConfig::seed)
      .def_readwrite("output_dir", &SweepConfig::output_dir)
      .def_readwrite("n_phase", &SweepConfig::n_phase)
      .def_readwrite("n_bins", &SweepConfig::n_bins)
      .def_readwrite("discard_periods", &SweepConfig::discard_periods)
      .def_readwrite("threads", &SweepConfig::threads)
      .def("__eq__", [](const SweepConfig& a, const SweepConfig& b) { return a == b; });

  m.def("run_sweep", [](const SweepConfig& c, std::filesystem::path dir) {
    Manifest man;
    {
      py::gil_scoped_release release;
      man = run_sweep(c, dir);
    }
    py::list cells;
    for (const auto& e : man.cells) {
      cells.append(py::dict(py::arg("epsilon") = e.epsilon, py::arg("phi_deg") = e.phi_deg, py::arg("ok") = e.ok,
                            py::arg("error") = e.error));
    }
    return py::dict(py::arg("manifest") = (man.directory / "manifest.json").string(), py::arg("cells") = cells);
  }, py::arg("config"), py::arg("directory"));
}
