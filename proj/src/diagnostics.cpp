#include "nla/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nla/errors.hpp"
#include "nla/spectral.hpp"

namespace nla {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sup_abs(const Field& f) {
  double m = 0.0;
  for (double v : f.values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

FitResult linear_fit(const std::vector<double>& x,
                     const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw InsufficientSamples("linear_fit: need at least 2 samples");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw InsufficientSamples("linear_fit: degenerate abscissae");
  FitResult fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double ybar = sy / n;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double pred = fit.intercept + fit.slope * x[i];
    ss_res += (y[i] - pred) * (y[i] - pred);
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  fit.r_squared = ss_tot <= 1e-30 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

double nonlocal_energy(const Field& u, const DiscreteKernel& k,
                       double lambda) {
  if (!(k.grid == u.grid)) throw GridMismatch("nonlocal_energy: grid mismatch");
  Field ku = convolve(k, u);
  const double value =
      2.0 * lambda * lambda * (inner_product(u, u) - inner_product(u, ku));
  return std::max(value, 0.0);
}

double nonlocal_energy_direct(const Field& u, const DiscreteKernel& k,
                              double lambda) {
  if (!(k.grid == u.grid))
    throw GridMismatch("nonlocal_energy_direct: grid mismatch");
  const Grid& g = u.grid;
  const int n = g.n_per_axis;
  const double w = g.cell_volume();
  double acc = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const int m = ((i - j) % n + n) % n;
        const double kv = k.values[(m + n / 2) % n];
        const double d = u.at(i) - u.at(j);
        acc += kv * d * d;
      }
    acc *= w * w;
  } else {
    for (int ix = 0; ix < n; ++ix)
      for (int iy = 0; iy < n; ++iy)
        for (int jx = 0; jx < n; ++jx) {
          const int mx = ((ix - jx) % n + n) % n;
          const std::size_t krow =
              static_cast<std::size_t>((mx + n / 2) % n) * n;
          for (int jy = 0; jy < n; ++jy) {
            const int my = ((iy - jy) % n + n) % n;
            const double kv = k.values[krow + (my + n / 2) % n];
            const double d = u.at(ix, iy) - u.at(jx, jy);
            acc += kv * d * d;
          }
        }
    acc *= w * w;
  }
  return lambda * lambda * acc;
}

double bbm_functional(const Field& f, const DiscreteKernel& rho, double n,
                      double p) {
  if (!(p >= 1.0)) throw InvalidArgument("bbm_functional: p must be >= 1");
  if (!(rho.grid == f.grid)) throw GridMismatch("bbm_functional: grid mismatch");
  if (!rho.source.compact_support()) {
    if (p != 2.0)
      throw InvalidArgument(
          "bbm_functional: non-compact kernel accepted only for p = 2");
    return nonlocal_energy(f, rho, n);
  }

  const Grid& g = f.grid;
  const int npts = g.n_per_axis;
  const double w = g.cell_volume();
  // support radius in index units, from the nonzero extent of the samples
  const int half = npts / 2;
  int radius = 0;
  if (g.dim == 1) {
    for (int m = -half; m < half; ++m)
      if (rho.values[(m + half + npts) % npts] > 0.0)
        radius = std::max(radius, std::abs(m));
  } else {
    for (int mx = -half; mx < half; ++mx)
      for (int my = -half; my < half; ++my)
        if (rho.values[static_cast<std::size_t>((mx + half + npts) % npts) *
                           npts +
                       (my + half + npts) % npts] > 0.0)
          radius = std::max({radius, std::abs(mx), std::abs(my)});
  }

  double acc = 0.0;
  if (g.dim == 1) {
    for (int i = 0; i < npts; ++i) {
      const double fi = f.at(i);
      for (int m = -radius; m <= radius; ++m) {
        const double kv = rho.values[(m + half + npts) % npts];
        if (kv == 0.0) continue;
        const double d = std::abs(fi - f.at(((i - m) % npts + npts) % npts));
        acc += kv * (p == 2.0 ? d * d : std::pow(d, p));
      }
    }
    acc *= w * w;
  } else {
    for (int ix = 0; ix < npts; ++ix)
      for (int iy = 0; iy < npts; ++iy) {
        const double fi = f.at(ix, iy);
        for (int mx = -radius; mx <= radius; ++mx) {
          const int jx = ((ix - mx) % npts + npts) % npts;
          const std::size_t krow =
              static_cast<std::size_t>((mx + half + npts) % npts) * npts;
          for (int my = -radius; my <= radius; ++my) {
            const double kv = rho.values[krow + (my + half + npts) % npts];
            if (kv == 0.0) continue;
            const double d =
                std::abs(fi - f.at(jx, ((iy - my) % npts + npts) % npts));
            acc += kv * (p == 2.0 ? d * d : std::pow(d, p));
          }
        }
      }
    acc *= w * w;
  }
  return std::pow(n, p) * acc;
}

DominationReport dirichlet_domination_check(const Field& f,
                                            const KernelSpec& rho,
                                            const std::vector<double>& n_list,
                                            double p) {
  DominationReport rep;
  const double moment = spec_abs_moment(rho, p);
  const double grad = gradient_lp_integral(f, p);
  rep.rhs = moment * grad;
  for (double n : n_list) {
    DiscreteKernel rho_n = discretize(rho, f.grid, n);
    const double val = bbm_functional(f, rho_n, n, p);
    rep.n_values.push_back(n);
    const double ratio = rep.rhs > 0.0 ? val / rep.rhs : 0.0;
    rep.ratios.push_back(ratio);
    rep.max_ratio = std::max(rep.max_ratio, ratio);
  }
  return rep;
}

FitResult decay_fit(const TrajectoryRecord& rec, double p,
                    std::pair<double, double> window) {
  const std::vector<double>* series = nullptr;
  if (std::isinf(p)) {
    series = &rec.linf_series;
  } else {
    auto it = rec.lp_series.find(p);
    if (it == rec.lp_series.end())
      throw InvalidArgument("decay_fit: norm p not recorded");
    series = &it->second;
  }
  std::vector<double> lt, ly;
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    const double t = rec.times[i];
    if (t < window.first || t > window.second) continue;
    const double y = (*series)[i];
    if (t <= 0.0 || y <= 0.0) continue;
    lt.push_back(std::log(t));
    ly.push_back(std::log(y));
  }
  if (lt.size() < 5)
    throw InsufficientSamples("decay_fit: fewer than 5 samples in window");
  FitResult fit = linear_fit(lt, ly);
  fit.window = window;
  return fit;
}

double renormalized_error(const Field& u, const Field& U, double p) {
  if (!(u.grid == U.grid)) throw GridMismatch("renormalized_error: grids");
  const double t = u.time_tag;
  if (std::abs(u.time_tag - U.time_tag) >
      1e-9 * std::max(1.0, std::abs(u.time_tag)))
    throw InvalidArgument("renormalized_error: time tags differ");
  const double d = u.grid.dim;
  const double expo = std::isinf(p) ? 0.5 * d : 0.5 * d * (1.0 - 1.0 / p);
  return std::pow(t, expo) * lp_norm(u - U, p);
}

KernelLimitReport kernel_limit_check_J(const KernelSpec& J, const Field& psi,
                                       double A,
                                       const std::vector<double>& lambda_list) {
  KernelLimitReport rep;
  Field lap = spectral_laplacian(psi);
  std::vector<double> loglam, logerr;
  for (double lam : lambda_list) {
    DiscreteKernel Jl = discretize(J, psi.grid, lam);
    Field op = nonlocal_operator(Jl, psi, lam);
    Field diff = op - (A * lap);
    const double err = sup_abs(diff);
    rep.lambdas.push_back(lam);
    rep.errors.push_back(err);
    if (err > 0.0) {
      loglam.push_back(std::log(lam));
      logerr.push_back(std::log(err));
    }
  }
  rep.decreasing = true;
  for (std::size_t i = 1; i < rep.errors.size(); ++i)
    if (!(rep.errors[i] < rep.errors[i - 1])) rep.decreasing = false;
  if (loglam.size() >= 2) {
    FitResult fit = linear_fit(loglam, logerr);
    rep.fitted_order = -fit.slope;  // err ~ lambda^{-order}
  }
  return rep;
}

KernelLimitReport kernel_limit_check_G(const KernelSpec& G, const Field& psi,
                                       const std::vector<double>& B,
                                       const std::vector<double>& lambda_list,
                                       double tol) {
  const Grid& g = psi.grid;
  if (static_cast<int>(B.size()) != g.dim)
    throw InvalidArgument("kernel_limit_check_G: B has wrong dimension");

  // B.grad psi and the derivative sup norms entering bound and floor
  Field bgrad = Field::zeros(g, psi.time_tag);
  {
    Field px = spectral_derivative(psi, 0);
    for (std::size_t i = 0; i < bgrad.values.size(); ++i)
      bgrad.values[i] = B[0] * px.values[i];
    if (g.dim == 2) {
      Field py = spectral_derivative(psi, 1);
      for (std::size_t i = 0; i < bgrad.values.size(); ++i)
        bgrad.values[i] += B[1] * py.values[i];
    }
  }
  double d2_sup = 0.0;
  double d4_sup = 0.0;
  {
    if (g.dim == 1) {
      Field pxx = spectral_laplacian(psi);
      d2_sup = sup_abs(pxx);
      d4_sup = sup_abs(spectral_laplacian(pxx));
    } else {
      // Frobenius bound on the Hessian
      Field pxx = spectral_derivative(spectral_derivative(psi, 0), 0);
      Field pyy = spectral_derivative(spectral_derivative(psi, 1), 1);
      Field pxy = spectral_derivative(spectral_derivative(psi, 0), 1);
      for (std::size_t i = 0; i < psi.values.size(); ++i) {
        const double h2 = pxx.values[i] * pxx.values[i] +
                          pyy.values[i] * pyy.values[i] +
                          2.0 * pxy.values[i] * pxy.values[i];
        d2_sup = std::max(d2_sup, std::sqrt(h2));
      }
      d4_sup = sup_abs(spectral_laplacian(spectral_laplacian(psi)));
    }
  }
  const double floor = 10.0 * g.spacing * g.spacing * d4_sup;

  KernelLimitReport rep;
  rep.bounds_hold = true;
  for (double lam : lambda_list) {
    DiscreteKernel Gl = reflect(discretize(G, psi.grid, lam));
    Field conv = convolve(Gl, psi);
    Field err_field = Field::zeros(g, psi.time_tag);
    for (std::size_t i = 0; i < err_field.values.size(); ++i)
      err_field.values[i] =
          lam * (conv.values[i] - psi.values[i]) - bgrad.values[i];
    const double err = sup_abs(err_field);
    const double bound = (1.0 + tol) * d2_sup / lam + floor;
    rep.lambdas.push_back(lam);
    rep.errors.push_back(err);
    rep.bounds.push_back(bound);
    if (err > bound) rep.bounds_hold = false;
  }
  return rep;
}

TailBoundReport tail_bound_check(
    const std::vector<std::pair<double, const TrajectoryRecord*>>& records,
    const Field& phi, const std::vector<double>& R_list,
    const std::vector<double>& t_list) {
  TailBoundReport rep;
  for (const auto& [lam, rec] : records) {
    double C = 0.0;
    for (double R : R_list) {
      const double phi_tail = tail_mass(phi, R);
      auto it = rec->tail_series.find(2.0 * R);
      if (it == rec->tail_series.end())
        throw InvalidArgument("tail_bound_check: tail at 2R not recorded");
      for (double t : t_list) {
        const std::size_t idx = rec->index_of_time(t);
        const double excess = it->second[idx] - phi_tail;
        if (excess <= 0.0) continue;
        const double shape = t / (R * R) + std::sqrt(t) / R;
        C = std::max(C, excess / shape);
      }
    }
    rep.lambdas.push_back(lam);
    rep.fitted_C.push_back(C);
    rep.C_global = std::max(rep.C_global, C);
  }
  double cmin = kInf, cmax = 0.0;
  for (double c : rep.fitted_C)
    if (c > 0.0) {
      cmin = std::min(cmin, c);
      cmax = std::max(cmax, c);
    }
  rep.spread = cmax > 0.0 ? cmax / cmin : 1.0;
  rep.lambda_uniform = rep.spread <= 1.5;
  return rep;
}

double dudt_hminus1(const Field& u, const Field& rhs) {
  if (!(u.grid == rhs.grid)) throw GridMismatch("dudt_hminus1: grid mismatch");
  return h_minus1_norm(rhs);
}

double integrate_series(const std::vector<double>& times,
                        const std::vector<double>& values, double t1,
                        double t2, int stride) {
  if (times.size() != values.size())
    throw InvalidArgument("integrate_series: length mismatch");
  double acc = 0.0;
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < times.size(); i += stride)
    if (times[i] >= t1 - 1e-12 && times[i] <= t2 + 1e-12) idx.push_back(i);
  for (std::size_t k = 0; k + 1 < idx.size(); ++k)
    acc += values[idx[k]] * (times[idx[k + 1]] - times[idx[k]]);
  return acc;
}

EnergyReport energy_report(double lambda, const TrajectoryRecord& rec,
                           double t1, double t2) {
  EnergyReport rep;
  rep.lambda = lambda;
  rep.t_window = {t1, t2};
  for (std::size_t i = 0; i < rec.times.size(); ++i) {
    if (rec.times[i] < t1 - 1e-12 || rec.times[i] > t2 + 1e-12) continue;
    rep.times.push_back(rec.times[i]);
    rep.per_time.push_back(rec.energy_series[i]);
  }
  rep.value = integrate_series(rep.times, rep.per_time, t1, t2);
  return rep;
}

}  // namespace nla
