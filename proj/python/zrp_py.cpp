#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "zrp/analysis.hpp"
#include "zrp/canonical.hpp"
#include "zrp/canonical_sampler.hpp"
#include "zrp/ensemble_gc.hpp"
#include "zrp/errors.hpp"
#include "zrp/kmc.hpp"
#include "zrp/lattice.hpp"
#include "zrp/state_space.hpp"
#include "zrp/thermo.hpp"

namespace py = pybind11;
using namespace zrp;

namespace {

RateModel make_model(double c0, double c1, double a, const std::string& mode,
                     std::optional<std::size_t> R) {
  return RateModel(c0, c1, a, cutoff_mode_from_string(mode), R);
}

py::dict lifetime_stats_dict(const LifetimeStats& s) {
  py::dict d;
  d["replicas"] = s.replicas;
  d["uncensored"] = s.uncensored;
  d["mean"] = s.mean;
  d["std_error"] = s.std_error;
  d["censored_fraction"] = s.censored_fraction;
  d["tau"] = s.tau;
  return d;
}

}  // namespace

PYBIND11_MODULE(_zrp, m) {
  m.doc() = "Zero-range process with size-dependent rates";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_MemoryError);
  py::register_exception<EmptyPhase>(m, "EmptyPhase", PyExc_RuntimeError);
  py::register_exception<BadInitial>(m, "BadInitial", PyExc_RuntimeError);
  py::register_exception<InsufficientData>(m, "InsufficientData", PyExc_RuntimeError);

  py::class_<RateModel>(m, "RateModel")
      .def(py::init(&make_model), py::arg("c0"), py::arg("c1"), py::arg("a"),
           py::arg("mode") = "lattice", py::arg("R") = std::nullopt)
      .def_property_readonly("c0", &RateModel::c0)
      .def_property_readonly("c1", &RateModel::c1)
      .def_property_readonly("a", &RateModel::a)
      .def_property_readonly("mode", [](const RateModel& r) { return std::string(to_string(r.mode())); })
      .def_property_readonly("explicit_R", &RateModel::explicit_R)
      .def("cutoff", &RateModel::cutoff, py::arg("L"), py::arg("N"))
      .def("rate", &RateModel::rate, py::arg("k"), py::arg("R"))
      .def("with_a", &RateModel::with_a)
      .def("with_cutoff", &RateModel::with_cutoff)
      .def("__repr__", [](const RateModel& r) {
        return "RateModel(c0=" + std::to_string(r.c0()) + ", c1=" + std::to_string(r.c1()) +
               ", a=" + std::to_string(r.a()) + ", mode='" + std::string(to_string(r.mode())) +
               "')";
      });

  // Grand-canonical ensemble.
  m.def("log_weight", &log_weight, py::arg("k"), py::arg("R"), py::arg("model"));
  m.def("log_z_R", &log_z_R, py::arg("phi"), py::arg("R"), py::arg("model"));
  m.def("rho_R", &rho_R, py::arg("phi"), py::arg("R"), py::arg("model"));
  m.def(
      "invert_phi",
      [](double rho, std::size_t R, const RateModel& model) {
        const auto p = invert_phi(rho, R, model);
        py::dict d;
        d["phi"] = p.phi;
        d["log_gap"] = p.log_gap;
        d["R"] = p.R;
        d["log_z"] = p.log_z;
        d["rho"] = p.rho;
        return d;
      },
      py::arg("rho"), py::arg("R"), py::arg("model"));
  m.def("phi_inf", &phi_inf, py::arg("rho"), py::arg("model"));
  m.def("rho_inf", &rho_inf, py::arg("phi"), py::arg("model"));
  m.def("p_fluid", &p_fluid, py::arg("phi"), py::arg("model"));
  m.def("s_fluid", &s_fluid, py::arg("rho"), py::arg("model"));
  m.def("s_gcan", &s_gcan, py::arg("rho"), py::arg("model"));
  m.def(
      "critical_density",
      [](const RateModel& model) {
        const auto c = critical_density(model);
        return py::make_tuple(c.rho_c, c.phi_c);
      },
      py::arg("model"), "Returns (rho_c, phi_c).");

  // Canonical ensemble and limits.
  m.def("log_partition", &log_partition, py::arg("L"), py::arg("N"), py::arg("model"));
  m.def(
      "phase_decomposition",
      [](std::size_t L, std::size_t N, const RateModel& model) {
        const auto d = phase_decomposition(L, N, model);
        py::dict out;
        out["L"] = d.L;
        out["N"] = d.N;
        out["R"] = d.R;
        out["M"] = d.M;
        out["log_Z_m"] = d.log_Z_m;
        out["probabilities"] = d.probabilities;
        out["log_Z"] = d.log_Z;
        return out;
      },
      py::arg("L"), py::arg("N"), py::arg("model"));
  m.def("rho_trans", &rho_trans, py::arg("model"));
  m.def("rho_meta", &rho_meta, py::arg("model"));
  m.def("s_can", py::overload_cast<double, const RateModel&>(&s_can), py::arg("rho"),
        py::arg("model"));
  m.def("phase_label", &phase_label, py::arg("rho"), py::arg("model"));
  m.def("rate_function", &rate_function, py::arg("rho"), py::arg("rho_bg"), py::arg("model"));
  m.def(
      "rate_function_curve",
      [](double rho, const std::vector<double>& grid, const RateModel& model) {
        const auto c = rate_function_curve(rho, grid, model);
        py::dict d;
        d["rho_bg"] = c.rho_bg;
        d["I"] = c.I;
        d["local_minima"] = c.local_minima;
        d["local_maxima"] = c.local_maxima;
        return d;
      },
      py::arg("rho"), py::arg("rho_bg"), py::arg("model"));
  m.def(
      "lifetime_exponents",
      [](double rho, const RateModel& model) {
        const auto x = lifetime_exponents(rho, model);
        return py::make_tuple(x.xi_fluid, x.xi_cond);
      },
      py::arg("rho"), py::arg("model"), "Returns (xi_fluid, xi_cond).");
  m.def("relative_entropy", &relative_entropy_matched, py::arg("L"), py::arg("N"),
        py::arg("model"));
  m.def(
      "sample_canonical",
      [](std::size_t L, std::size_t N, const RateModel& model, const std::string& phase,
         std::uint64_t seed) {
        Rng rng = make_stream(seed, L, 0);
        return sample_canonical(L, N, model, canonical_phase_from_string(phase), rng);
      },
      py::arg("L"), py::arg("N"), py::arg("model"), py::arg("phase") = "unconditioned",
      py::arg("seed") = 0);

  // Dynamics.
  m.def(
      "simulate",
      [](std::size_t L, std::size_t N, const RateModel& model, const std::string& init,
         double t_max, double sample_dt, std::uint64_t seed, const std::string& kernel,
         double p_right) {
        py::gil_scoped_release release;
        const Lattice lattice(L, kernel_from_name(kernel, p_right, 1));
        Rng rng = make_stream(seed, L, 0);
        SimState state = init_state(L, N, model, initial_phase_from_string(init), rng);
        const auto traj = record_trajectory(state, model, lattice, t_max, sample_dt, rng, nullptr);
        std::vector<double> t, bg, mx;
        for (const auto& s : traj) {
          t.push_back(s.t);
          bg.push_back(s.sigma_bg_per_L);
          mx.push_back(s.max_per_L);
        }
        py::gil_scoped_acquire acquire;
        py::dict d;
        d["t"] = t;
        d["sigma_bg_per_L"] = bg;
        d["max_per_L"] = mx;
        d["events"] = state.events;
        d["R"] = state.R();
        return d;
      },
      py::arg("L"), py::arg("N"), py::arg("model"), py::arg("init") = "uniform",
      py::arg("t_max") = 100.0, py::arg("sample_dt") = 1.0, py::arg("seed") = 0,
      py::arg("kernel") = "symmetric", py::arg("p_right") = 1.0);
  m.def(
      "lifetime_sweep",
      [](const std::vector<std::size_t>& L_list, double rho, const RateModel& model,
         std::size_t replicas, std::uint64_t seed, std::size_t workers,
         std::optional<double> t_max) {
        SweepOptions o;
        o.L_list = L_list;
        o.rho = rho;
        o.replicas = replicas;
        o.seed = seed;
        o.workers = workers;
        o.t_max = t_max;
        std::vector<LifetimeRecord> recs;
        {
          py::gil_scoped_release release;
          recs = lifetime_sweep(o, model);
        }
        py::list out;
        for (const auto& r : recs) {
          py::dict d;
          d["L"] = r.L;
          d["N"] = r.N;
          d["R"] = r.R;
          d["fluid"] = lifetime_stats_dict(*r.fluid);
          d["cond"] = lifetime_stats_dict(*r.cond);
          out.append(d);
        }
        return out;
      },
      py::arg("L_list"), py::arg("rho"), py::arg("model"), py::arg("replicas") = 20,
      py::arg("seed") = 0, py::arg("workers") = 1, py::arg("t_max") = std::nullopt);
  m.def(
      "check_stationarity",
      [](std::size_t L, std::size_t N, std::size_t R, const RateModel& model,
         const std::string& kernel, double p_right) {
        const auto r = check_stationarity(L, N, R, model.with_cutoff(R),
                                          Lattice(L, kernel_from_name(kernel, p_right, 1)));
        py::dict d;
        d["states"] = r.states;
        d["max_residual"] = r.max_residual;
        d["max_balance_defect"] = r.max_balance_defect;
        d["detailed_balance"] = r.detailed_balance;
        return d;
      },
      py::arg("L"), py::arg("N"), py::arg("R"), py::arg("model"),
      py::arg("kernel") = "symmetric", py::arg("p_right") = 1.0);
  m.def(
      "lln_batches",
      [](std::size_t L, std::size_t R, double rho, const RateModel& model, std::size_t batches,
         std::uint64_t seed) {
        const auto b = lln_batches(L, R, rho, model, batches, seed);
        py::dict d;
        d["means"] = b.means;
        d["batches_exceeding_R"] = b.batches_exceeding_R;
        d["max_occupation"] = b.max_occupation;
        d["phi"] = b.phi;
        d["target"] = b.target;
        d["max_deviation"] = b.max_deviation;
        d["tail_bound"] = b.tail_bound;
        return d;
      },
      py::arg("L"), py::arg("R"), py::arg("rho"), py::arg("model"), py::arg("batches") = 100,
      py::arg("seed") = 0);
  m.def("ks_exponential", &ks_exponential, py::arg("sample"));
}
