#include "nla/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "nla/errors.hpp"
#include "nla/fft.hpp"

namespace nla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// |u|^(q-1) u with 0^(q-1)*0 = 0; integer exponents avoid pow.
void signed_power(const std::vector<double>& u, double q,
                  std::vector<double>& out) {
  out.resize(u.size());
  if (q == 2.0) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::abs(u[i]) * u[i];
  } else if (q == 3.0) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] * u[i] * u[i];
  } else {
    for (std::size_t i = 0; i < u.size(); ++i)
      out[i] = u[i] == 0.0 ? 0.0 : std::pow(std::abs(u[i]), q - 1.0) * u[i];
  }
}

double sup_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

ModelParams::ModelParams(double q_, double lambda_, KernelSpec J, KernelSpec G,
                         int dim_)
    : q(q_), lambda(lambda_), J_spec(std::move(J)), G_spec(std::move(G)),
      dim(dim_) {
  if (!(q > 1.0)) throw InvalidArgument("ModelParams: q must satisfy q > 1");
  if (!(lambda >= 1.0))
    throw InvalidArgument("ModelParams: lambda must satisfy lambda >= 1");
  if (dim != 1 && dim != 2) throw InvalidArgument("ModelParams: dim in {1,2}");
}

double ModelParams::convection_prefactor() const {
  return std::pow(lambda, dim * (1.0 - q) + 2.0);
}

double auto_dt(const ModelParams& params, double linf, double safety) {
  const double lq = linf > 0.0 ? std::pow(linf, params.q - 1.0) : 0.0;
  const double bound = 2.0 * params.diffusion_prefactor() +
                       2.0 * params.q * params.convection_prefactor() * lq;
  return safety / bound;
}

Field rhs(const Field& u, const ModelParams& params, const DiscreteKernel& J,
          const DiscreteKernel& G) {
  if (!(J.grid == u.grid) || !(G.grid == u.grid))
    throw GridMismatch("rhs: kernel/grid mismatch");
  if (J.scale != params.lambda || G.scale != params.lambda)
    throw InvalidArgument("rhs: kernels not discretized at params.lambda");

  Field diff = convolve(J, u);
  Field nl = Field::zeros(u.grid, u.time_tag);
  signed_power(u.values, params.q, nl.values);
  Field conv = convolve(G, nl);

  const double a = params.diffusion_prefactor();
  const double b = params.convection_prefactor();
  Field out = Field::zeros(u.grid, u.time_tag);
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = a * (diff.values[i] - u.values[i]) +
                    b * (conv.values[i] - nl.values[i]);
  return out;
}

Field step(const Field& u, double dt, const ModelParams& params,
           const DiscreteKernel& J, const DiscreteKernel& G, Scheme scheme) {
  const double linf_pre = sup_norm(u.values);

  Field out = Field::zeros(u.grid, u.time_tag + dt);
  if (scheme == Scheme::euler) {
    Field k1 = rhs(u, params, J, G);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] = u.values[i] + dt * k1.values[i];
  } else {
    Field k1 = rhs(u, params, J, G);
    Field s = u;
    for (std::size_t i = 0; i < s.values.size(); ++i)
      s.values[i] = u.values[i] + 0.5 * dt * k1.values[i];
    Field k2 = rhs(s, params, J, G);
    for (std::size_t i = 0; i < s.values.size(); ++i)
      s.values[i] = u.values[i] + 0.5 * dt * k2.values[i];
    Field k3 = rhs(s, params, J, G);
    for (std::size_t i = 0; i < s.values.size(); ++i)
      s.values[i] = u.values[i] + dt * k3.values[i];
    Field k4 = rhs(s, params, J, G);
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] =
          u.values[i] + dt / 6.0 *
                            (k1.values[i] + 2.0 * k2.values[i] +
                             2.0 * k3.values[i] + k4.values[i]);
  }

  const double lq = linf_pre > 0.0 ? std::pow(linf_pre, params.q - 1.0) : 0.0;
  const double bound = 2.0 * params.diffusion_prefactor() +
                       2.0 * params.q * params.convection_prefactor() * lq;
  const double linf_post = sup_norm(out.values);
  if (!std::isfinite(linf_post))
    throw StabilityViolation("step: field became non-finite at dt=" +
                             std::to_string(dt));
  if (linf_post > linf_pre * (1.0 + 10.0 * dt * bound))
    throw StabilityViolation(
        "step: sup norm grew from " + std::to_string(linf_pre) + " to " +
        std::to_string(linf_post) + " at dt=" + std::to_string(dt));
  return out;
}

double TrajectoryRecord::lp_at(double p, double t) const {
  return lp_series.at(p)[index_of_time(t)];
}

std::size_t TrajectoryRecord::index_of_time(double t) const {
  for (std::size_t i = 0; i < times.size(); ++i)
    if (std::abs(times[i] - t) <= 1e-9 * std::max(1.0, std::abs(t))) return i;
  throw InvalidArgument("TrajectoryRecord: time " + std::to_string(t) +
                        " was not recorded");
}

void write_trajectory_csv(const TrajectoryRecord& rec,
                          const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) throw Error("write_trajectory_csv: cannot open " + path);
  std::fputs("t,mass,linf,l1,l2", fp);
  for (const auto& [p, series] : rec.lp_series)
    if (p != 1.0 && p != 2.0) std::fprintf(fp, ",lp_%g", p);
  std::fputs(",energy", fp);
  for (const auto& [R, series] : rec.tail_series)
    std::fprintf(fp, ",tail_%g", R);
  std::fputs(",dudt_hm1\n", fp);
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    std::fprintf(fp, "%.17g,%.17g,%.17g,%.17g,%.17g", rec.times[i],
                 rec.mass_series[i], rec.linf_series[i],
                 rec.lp_series.at(1.0)[i], rec.lp_series.at(2.0)[i]);
    for (const auto& [p, series] : rec.lp_series)
      if (p != 1.0 && p != 2.0) std::fprintf(fp, ",%.17g", series[i]);
    std::fprintf(fp, ",%.17g", rec.energy_series[i]);
    for (const auto& [R, series] : rec.tail_series)
      std::fprintf(fp, ",%.17g", series[i]);
    std::fprintf(fp, ",%.17g\n", rec.dudt_hm1_series[i]);
  }
  std::fclose(fp);
}

namespace {

struct Recorder {
  TrajectoryRecord rec;
  std::vector<double> ps;
  std::vector<double> radii;
  double monitor_R = 0.0;
  double tail_tol = kInf;

  Recorder(const StepperConfig& cfg, const Grid& g) {
    ps = {1.0, 2.0};
    for (double p : cfg.p_extra)
      if (p != 1.0 && p != 2.0) ps.push_back(p);
    for (double p : ps) rec.lp_series[p] = {};
    radii = cfg.tail_radii;
    for (double R : radii) rec.tail_series[R] = {};
    monitor_R = 0.5 * g.half_width;
    tail_tol = cfg.tail_tol;
  }

  void push(double t, const Field& u, const Field& du, double energy) {
    rec.times.push_back(t);
    rec.mass_series.push_back(mass(u));
    rec.linf_series.push_back(lp_norm(u, kInf));
    for (double p : ps) rec.lp_series[p].push_back(lp_norm(u, p));
    rec.energy_series.push_back(energy);
    for (double R : radii) rec.tail_series[R].push_back(tail_mass(u, R));
    rec.dudt_hm1_series.push_back(h_minus1_norm(du));
    const double tail = tail_mass(u, monitor_R);
    if (tail >= tail_tol)
      throw DomainOverflow("tail monitor tripped at t=" + std::to_string(t) +
                           ": mass " + std::to_string(tail) + " beyond R=L/2" +
                           " exceeds tol " + std::to_string(tail_tol));
  }
};

// Record times inside [t0, t_end], sorted, deduplicated.
std::vector<double> event_times(const StepperConfig& cfg, double t0) {
  std::vector<double> ev;
  for (double t : cfg.record_times)
    if (t >= t0 - 1e-14 && t <= cfg.t_end + 1e-14) ev.push_back(t);
  std::sort(ev.begin(), ev.end());
  ev.erase(std::unique(ev.begin(), ev.end()), ev.end());
  return ev;
}

}  // namespace

std::pair<TrajectoryRecord, Field> evolve(const Field& u0,
                                          const ModelParams& params,
                                          const StepperConfig& cfg) {
  require_finite(u0, "evolve");
  if (params.dim != u0.grid.dim)
    throw InvalidArgument("evolve: params.dim does not match the grid");
  DiscreteKernel J = discretize(params.J_spec, u0.grid, params.lambda);
  DiscreteKernel G = discretize(params.G_spec, u0.grid, params.lambda);

  Recorder recorder(cfg, u0.grid);
  Field u = u0;
  double t = u0.time_tag;

  const double l2 = params.diffusion_prefactor();
  auto energy_of = [&](const Field& v) {
    // lambda^2 * iint J_l(x-y) (v(x)-v(y))^2 = 2 lambda^2 (||v||_2^2 - <v, J*v>)
    Field Jv = convolve(J, v);
    const double n2 = inner_product(v, v);
    return 2.0 * l2 * (n2 - inner_product(v, Jv));
  };
  auto record_now = [&]() {
    Field du = rhs(u, params, J, G);
    recorder.push(t, u, du, energy_of(u));
  };

  std::vector<double> events = event_times(cfg, t);
  std::size_t ei = 0;
  const double tol = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  while (ei < events.size() && events[ei] <= t + tol) {
    record_now();
    ++ei;
  }

  double linf_ref = lp_norm(u, kInf);
  double dt_auto = cfg.dt > 0.0 ? cfg.dt : auto_dt(params, linf_ref, cfg.safety);

  while (t < cfg.t_end - tol) {
    const double target = ei < events.size() ? events[ei] : cfg.t_end;
    if (cfg.dt <= 0.0) {
      const double linf = lp_norm(u, kInf);
      if (std::abs(linf - linf_ref) > 0.1 * linf_ref) {
        linf_ref = linf;
        dt_auto = auto_dt(params, linf, cfg.safety);
      }
    }
    const double dt = std::min(dt_auto, target - t);
    u = step(u, dt, params, J, G, cfg.scheme);
    t += dt;
    if (std::abs(t - target) <= tol) {
      t = target;
      u.time_tag = t;
      if (ei < events.size() && target == events[ei]) {
        record_now();
        ++ei;
      }
    } else {
      u.time_tag = t;
    }
  }
  return {std::move(recorder.rec), std::move(u)};
}

namespace {

struct SpectralWorkspace {
  Grid grid;
  std::size_t n;
  std::vector<double> kappa;   // per-axis frequencies
  std::vector<double> ksq;     // |kappa|^2 per mode
  fft::cvec scratch;

  explicit SpectralWorkspace(const Grid& g)
      : grid(g), n(static_cast<std::size_t>(g.n_per_axis)) {
    kappa.resize(n);
    for (std::size_t k = 0; k < n; ++k)
      kappa[k] = box_frequency(g, static_cast<int>(k));
    ksq.resize(g.point_count());
    if (g.dim == 1) {
      for (std::size_t k = 0; k < n; ++k) ksq[k] = kappa[k] * kappa[k];
    } else {
      for (std::size_t kx = 0; kx < n; ++kx)
        for (std::size_t ky = 0; ky < n; ++ky)
          ksq[kx * n + ky] = kappa[kx] * kappa[kx] + kappa[ky] * kappa[ky];
    }
  }

  void forward(fft::cvec& a) const {
    if (grid.dim == 1)
      fft::forward(a);
    else
      fft::forward_2d(a, n, n);
  }
  void inverse(fft::cvec& a) const {
    if (grid.dim == 1)
      fft::inverse(a);
    else
      fft::inverse_2d(a, n, n);
  }
};

}  // namespace

std::pair<TrajectoryRecord, Field> solve_local_reference(
    const Field& u0, double A, const std::vector<double>& B, double q,
    const StepperConfig& cfg) {
  require_finite(u0, "solve_local_reference");
  const Grid& g = u0.grid;
  if (g.dim != 1 && g.dim != 2)
    throw InvalidArgument("solve_local_reference: dim in {1,2}");
  if (static_cast<int>(B.size()) != g.dim)
    throw InvalidArgument("solve_local_reference: B has wrong dimension");
  if (!(A > 0)) throw InvalidArgument("solve_local_reference: A must be > 0");

  SpectralWorkspace ws(g);
  const std::size_t npts = g.point_count();
  const std::size_t n = ws.n;

  fft::cvec uhat(npts);
  for (std::size_t i = 0; i < npts; ++i) uhat[i] = u0.values[i];
  ws.forward(uhat);

  double bnorm = 0.0;
  for (double b : B) bnorm += b * b;
  bnorm = std::sqrt(bnorm);
  const double kmax = M_PI * static_cast<double>(n / 2) / g.half_width;

  std::vector<double> phys(npts), npow(npts);
  fft::cvec nhat(npts);

  auto to_physical = [&](const fft::cvec& hat, std::vector<double>& out) {
    fft::cvec tmp = hat;
    ws.inverse(tmp);
    for (std::size_t i = 0; i < npts; ++i) out[i] = tmp[i].real();
  };

  // Convection term N_hat = -i (B . kappa) fft(|u|^(q-1) u).
  auto nonlinear = [&](const fft::cvec& hat, fft::cvec& out) {
    if (bnorm == 0.0) {
      std::fill(out.begin(), out.end(), std::complex<double>(0.0));
      return;
    }
    to_physical(hat, phys);
    signed_power(phys, q, npow);
    for (std::size_t i = 0; i < npts; ++i) out[i] = npow[i];
    ws.forward(out);
    if (g.dim == 1) {
      for (std::size_t k = 0; k < n; ++k)
        out[k] *= std::complex<double>(0.0, -B[0] * ws.kappa[k]);
    } else {
      for (std::size_t kx = 0; kx < n; ++kx)
        for (std::size_t ky = 0; ky < n; ++ky)
          out[kx * n + ky] *= std::complex<double>(
              0.0, -(B[0] * ws.kappa[kx] + B[1] * ws.kappa[ky]));
    }
  };

  Recorder recorder(cfg, g);
  auto record_now = [&](double t) {
    Field u = Field::zeros(g, t);
    to_physical(uhat, u.values);
    // full rhs = A Lap u + convection, assembled spectrally
    fft::cvec duhat(npts);
    nonlinear(uhat, duhat);
    for (std::size_t i = 0; i < npts; ++i)
      duhat[i] += -A * ws.ksq[i] * uhat[i];
    Field du = Field::zeros(g, t);
    to_physical(duhat, du.values);
    // local Dirichlet energy hook: 2 A int |grad u|^2
    double grad2 = 0.0;
    for (std::size_t i = 0; i < npts; ++i) grad2 += ws.ksq[i] * std::norm(uhat[i]);
    grad2 *= g.cell_volume() / static_cast<double>(npts);
    recorder.push(t, u, du, 2.0 * A * grad2);
  };

  double t = u0.time_tag;
  std::vector<double> events = event_times(cfg, t);
  std::size_t ei = 0;
  const double tol = 1e-12 * std::max(1.0, std::abs(cfg.t_end));
  while (ei < events.size() && events[ei] <= t + tol) {
    record_now(t);
    ++ei;
  }

  auto local_dt = [&](double linf) {
    if (cfg.dt > 0.0) return cfg.dt;
    const double speed =
        bnorm * q * (linf > 0.0 ? std::pow(linf, q - 1.0) : 0.0) * kmax;
    return speed > 0.0 ? cfg.safety * 2.0 / speed : kInf;
  };

  to_physical(uhat, phys);
  double linf_ref = sup_norm(phys);
  double dt_auto = local_dt(linf_ref);

  std::vector<double> ehalf(npts), efull(npts);
  fft::cvec k1(npts), k2(npts), k3(npts), k4(npts), stage(npts);
  double dt_prev = -1.0;

  while (t < cfg.t_end - tol) {
    const double target = ei < events.size() ? events[ei] : cfg.t_end;
    if (cfg.dt <= 0.0) {
      to_physical(uhat, phys);
      const double linf = sup_norm(phys);
      if (std::abs(linf - linf_ref) > 0.1 * linf_ref || !std::isfinite(dt_auto)) {
        linf_ref = linf;
        dt_auto = local_dt(linf);
      }
    }
    const double dt = std::min(dt_auto, target - t);
    if (dt != dt_prev) {
      for (std::size_t i = 0; i < npts; ++i) {
        ehalf[i] = std::exp(-A * ws.ksq[i] * 0.5 * dt);
        efull[i] = ehalf[i] * ehalf[i];
      }
      dt_prev = dt;
    }

    if (cfg.scheme == Scheme::euler || bnorm == 0.0) {
      nonlinear(uhat, k1);
      for (std::size_t i = 0; i < npts; ++i)
        uhat[i] = efull[i] * (uhat[i] + dt * k1[i]);
    } else {
      nonlinear(uhat, k1);
      for (std::size_t i = 0; i < npts; ++i)
        stage[i] = ehalf[i] * (uhat[i] + 0.5 * dt * k1[i]);
      nonlinear(stage, k2);
      for (std::size_t i = 0; i < npts; ++i)
        stage[i] = ehalf[i] * uhat[i] + 0.5 * dt * k2[i];
      nonlinear(stage, k3);
      for (std::size_t i = 0; i < npts; ++i)
        stage[i] = efull[i] * uhat[i] + dt * ehalf[i] * k3[i];
      nonlinear(stage, k4);
      for (std::size_t i = 0; i < npts; ++i)
        uhat[i] = efull[i] * uhat[i] +
                  dt / 6.0 *
                      (efull[i] * k1[i] + 2.0 * ehalf[i] * (k2[i] + k3[i]) +
                       k4[i]);
    }
    t += dt;
    if (std::abs(t - target) <= tol) {
      t = target;
      if (ei < events.size() && target == events[ei]) {
        record_now(t);
        ++ei;
      }
    }
  }

  Field out = Field::zeros(g, t);
  to_physical(uhat, out.values);
  require_finite(out, "solve_local_reference");
  return {std::move(recorder.rec), std::move(out)};
}

}  // namespace nla
