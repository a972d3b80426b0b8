#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nla/config.hpp"
#include "nla/diagnostics.hpp"
#include "nla/errors.hpp"
#include "nla/experiments.hpp"
#include "nla/grid.hpp"
#include "nla/kernels.hpp"
#include "nla/profiles.hpp"
#include "nla/solver.hpp"
#include "nla/spectral.hpp"

namespace py = pybind11;
using namespace nla;

namespace {

Field field_from_array(const Grid& g, py::array_t<double> values, double t) {
  py::buffer_info info = values.request();
  if (static_cast<std::size_t>(info.size) != g.point_count())
    throw InvalidArgument("values length does not match grid");
  std::vector<double> v(g.point_count());
  const double* src = static_cast<const double*>(info.ptr);
  std::copy(src, src + v.size(), v.begin());
  return Field(g, std::move(v), t);
}

py::array_t<double> field_values(const Field& f) {
  const Grid& g = f.grid;
  if (g.dim == 1) {
    py::array_t<double> out(g.point_count());
    std::copy(f.values.begin(), f.values.end(),
              static_cast<double*>(out.request().ptr));
    return out;
  }
  py::array_t<double> out({g.n_per_axis, g.n_per_axis});
  std::copy(f.values.begin(), f.values.end(),
            static_cast<double*>(out.request().ptr));
  return out;
}

py::dict record_to_dict(const TrajectoryRecord& rec) {
  py::dict d;
  d["t"] = rec.times;
  d["mass"] = rec.mass_series;
  d["linf"] = rec.linf_series;
  d["energy"] = rec.energy_series;
  d["dudt_hm1"] = rec.dudt_hm1_series;
  py::dict lp, tails;
  for (const auto& [p, series] : rec.lp_series) lp[py::float_(p)] = series;
  for (const auto& [R, series] : rec.tail_series)
    tails[py::float_(R)] = series;
  d["lp"] = lp;
  d["tails"] = tails;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "nonlocal convection-diffusion laboratory";

  py::register_exception<Error>(m, "NlaError");

  py::class_<Grid>(m, "Grid")
      .def(py::init<int, int, double>(), py::arg("dim"), py::arg("n_per_axis"),
           py::arg("half_width"))
      .def_readonly("dim", &Grid::dim)
      .def_readonly("n_per_axis", &Grid::n_per_axis)
      .def_readonly("half_width", &Grid::half_width)
      .def_readonly("spacing", &Grid::spacing)
      .def("point_count", &Grid::point_count)
      .def("coord", &Grid::coord);

  py::class_<Field>(m, "Field")
      .def(py::init(&field_from_array), py::arg("grid"), py::arg("values"),
           py::arg("time_tag") = 0.0)
      .def_static("zeros", &Field::zeros, py::arg("grid"),
                  py::arg("time_tag") = 0.0)
      .def_readonly("grid", &Field::grid)
      .def_readwrite("time_tag", &Field::time_tag)
      .def_property_readonly("values", &field_values);

  m.def("mass", &mass);
  m.def("lp_norm", &lp_norm);
  m.def("tail_mass", &tail_mass);
  m.def("rescale_field", &rescale_field);
  m.def("h_minus1_norm", &h_minus1_norm);
  m.def("spectral_derivative", &spectral_derivative, py::arg("f"),
        py::arg("axis") = 0);
  m.def("spectral_laplacian", &spectral_laplacian);

  py::class_<KernelSpec>(m, "KernelSpec")
      .def_static("gaussian", &KernelSpec::gaussian, py::arg("sigma"),
                  py::arg("dim") = 1)
      .def_static("bump", &KernelSpec::bump, py::arg("radius"),
                  py::arg("dim") = 1)
      .def_static("shifted_bump", &KernelSpec::shifted_bump, py::arg("radius"),
                  py::arg("shift"), py::arg("dim") = 1)
      .def_static("parse", &KernelSpec::parse, py::arg("text"),
                  py::arg("dim") = 1)
      .def("describe", &KernelSpec::describe)
      .def("effective_radius", &KernelSpec::effective_radius)
      .def("compact_support", &KernelSpec::compact_support);

  py::class_<DiscreteKernel>(m, "DiscreteKernel")
      .def_readonly("grid", &DiscreteKernel::grid)
      .def_readonly("scale", &DiscreteKernel::scale)
      .def_property_readonly("values", [](const DiscreteKernel& k) {
        py::array_t<double> out(k.values.size());
        std::copy(k.values.begin(), k.values.end(),
                  static_cast<double*>(out.request().ptr));
        return out;
      });

  m.def("discretize", &discretize);
  m.def("second_moment_A", &second_moment_A);
  m.def("first_moment_B", &first_moment_B);
  m.def("convolve", &convolve);
  m.def("convolve_direct", &convolve_direct);
  m.def("nonlocal_operator", &nonlocal_operator);
  m.def("reflect", &reflect);

  py::class_<SymmetryReport>(m, "SymmetryReport")
      .def_readonly("is_even", &SymmetryReport::is_even)
      .def_readonly("odd_moment_max", &SymmetryReport::odd_moment_max);
  m.def("check_symmetry", &check_symmetry);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init<double, double, KernelSpec, KernelSpec, int>(),
           py::arg("q"), py::arg("lambda_"), py::arg("J"), py::arg("G"),
           py::arg("dim"))
      .def_readonly("q", &ModelParams::q)
      .def_readonly("lambda_", &ModelParams::lambda)
      .def("diffusion_prefactor", &ModelParams::diffusion_prefactor)
      .def("convection_prefactor", &ModelParams::convection_prefactor);

  py::enum_<Scheme>(m, "Scheme")
      .value("euler", Scheme::euler)
      .value("rk4", Scheme::rk4);

  py::class_<StepperConfig>(m, "StepperConfig")
      .def(py::init<>())
      .def_readwrite("scheme", &StepperConfig::scheme)
      .def_readwrite("dt", &StepperConfig::dt)
      .def_readwrite("safety", &StepperConfig::safety)
      .def_readwrite("t_end", &StepperConfig::t_end)
      .def_readwrite("record_times", &StepperConfig::record_times)
      .def_readwrite("tail_radii", &StepperConfig::tail_radii)
      .def_readwrite("tail_tol", &StepperConfig::tail_tol)
      .def_readwrite("p_extra", &StepperConfig::p_extra);

  m.def("evolve", [](const Field& u0, const ModelParams& p,
                     const StepperConfig& cfg) {
    auto [rec, u] = evolve(u0, p, cfg);
    return py::make_tuple(record_to_dict(rec), u);
  });
  m.def("solve_local_reference",
        [](const Field& u0, double A, const std::vector<double>& B, double q,
           const StepperConfig& cfg) {
          auto [rec, u] = solve_local_reference(u0, A, B, q, cfg);
          return py::make_tuple(record_to_dict(rec), u);
        });

  py::enum_<ProfileKind>(m, "ProfileKind")
      .value("heat", ProfileKind::heat)
      .value("burgers_source", ProfileKind::burgers_source)
      .value("reference_numeric", ProfileKind::reference_numeric);

  py::class_<ProfileSpec>(m, "ProfileSpec")
      .def(py::init<double, double, std::vector<double>, double,
                    ProfileKind>(),
           py::arg("m"), py::arg("A"), py::arg("B"), py::arg("q"),
           py::arg("kind"))
      .def_readonly("m", &ProfileSpec::m)
      .def_readonly("A", &ProfileSpec::A)
      .def_readonly("B", &ProfileSpec::B)
      .def_readonly("q", &ProfileSpec::q)
      .def_readonly("alpha", &ProfileSpec::alpha);

  m.def("heat_profile", &heat_profile);
  m.def("burgers_source_profile", &burgers_source_profile, py::arg("spec"),
        py::arg("t"), py::arg("grid"), py::arg("t0") = 1e-3);
  m.def("profile_residual", &profile_residual);

  m.def("nonlocal_energy", &nonlocal_energy);
  m.def("nonlocal_energy_direct", &nonlocal_energy_direct);
  m.def("bbm_functional", &bbm_functional);
  m.def("renormalized_error", &renormalized_error);
  m.def("dudt_hminus1", &dudt_hminus1);

  py::class_<FitResult>(m, "FitResult")
      .def_readonly("slope", &FitResult::slope)
      .def_readonly("intercept", &FitResult::intercept)
      .def_readonly("r_squared", &FitResult::r_squared);
  m.def("decay_fit", [](const py::dict& rec, double p,
                        std::pair<double, double> window) {
    TrajectoryRecord r;
    r.times = rec["t"].cast<std::vector<double>>();
    r.linf_series = rec["linf"].cast<std::vector<double>>();
    for (const auto& item : rec["lp"].cast<py::dict>())
      r.lp_series[item.first.cast<double>()] =
          item.second.cast<std::vector<double>>();
    return decay_fit(r, p, window);
  });

  m.def("run_config_file",
        [](const std::string& path, const std::string& out_dir,
           const std::vector<std::string>& overrides) {
          ExperimentConfig cfg = parse_config_file(path);
          for (const auto& ov : overrides) apply_override(cfg, ov);
          if (!out_dir.empty()) cfg.out_dir = out_dir;
          return run(cfg);
        },
        py::arg("path"), py::arg("out_dir") = "",
        py::arg("overrides") = std::vector<std::string>{});
}
