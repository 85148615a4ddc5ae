#include "dtt/saddle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "dtt/error.hpp"

namespace dtt {

namespace {

constexpr cplx kI{0.0, 1.0};

double free_path(const PacketSpec& packet, const BarrierSpec& barrier) { return barrier.z2 - packet.z0; }

SaddlePoint make_point(double t, cplx p, const Action& a, const PacketSpec& packet, const BarrierSpec& barrier) {
  SaddlePoint s;
  s.t = t;
  s.p = p;
  s.F = a.F;
  s.Fpp = a.Fpp;
  s.v = velocity_of_momentum(p);
  s.tau = phase_time(p, barrier, free_path(packet, barrier));
  s.residual = std::abs(a.Fp);
  return s;
}

}  // namespace

Action action(cplx p, double t, const PacketSpec& packet, const BarrierSpec& barrier) {
  const Jet lnT = log_transmission(p, barrier);
  const double D = free_path(packet, barrier);
  const double G = packet.gamma;
  const cplx E = energy_of_momentum(p);
  const cplx v = p / E;
  const cplx dp = p - packet.p0;
  Action a;
  a.F = -kI * (-dp * dp / (2.0 * G) + lnT.v + kI * p * D) - E * t;
  a.Fp = -kI * (-dp / G + lnT.d1 + kI * D) - v * t;
  a.Fpp = -kI * (-1.0 / G + lnT.d2) - t / (E * E * E);
  return a;
}

SaddlePoint solve_saddle(double t, cplx guess, const PacketSpec& packet, const BarrierSpec& barrier,
                         const SaddleOptions& options) {
  cplx p = guess;
  Action a = action(p, t, packet, barrier);
  double res = std::abs(a.Fp);
  for (int it = 0; it < options.max_iterations; ++it) {
    if (res < options.tolerance) {
      SaddlePoint s = make_point(t, p, a, packet, barrier);
      s.iterations = it;
      s.converged = true;
      return s;
    }
    const cplx step = -a.Fp / a.Fpp;
    double lambda = 1.0;
    cplx pn;
    Action an;
    double rn = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 30; ++k) {
      pn = p + lambda * step;
      an = action(pn, t, packet, barrier);
      rn = std::abs(an.Fp);
      if (rn < res) break;
      lambda *= 0.5;
    }
    if (!(rn < res)) {
      // No decrease along the Newton direction: rounding level reached.
      if (res < options.stall_tolerance) {
        SaddlePoint s = make_point(t, p, a, packet, barrier);
        s.iterations = it;
        s.converged = true;
        return s;
      }
      throw ConvergenceError("saddle Newton iteration stalled at t = " + std::to_string(t), res);
    }
    p = pn;
    a = an;
    res = rn;
  }
  if (res < options.stall_tolerance) {
    SaddlePoint s = make_point(t, p, a, packet, barrier);
    s.iterations = options.max_iterations;
    s.converged = true;
    return s;
  }
  throw ConvergenceError("saddle Newton iteration did not converge at t = " + std::to_string(t), res);
}

double real_axis_saddle(const PacketSpec& packet, const BarrierSpec& barrier) {
  const double G = packet.gamma;
  auto g = [&](double p) { return (p - packet.p0) / G - log_T_derivative(cplx{p}, barrier).real(); };
  const double g0 = g(packet.p0);
  if (g0 == 0.0) return packet.p0;
  const double dir = g0 < 0.0 ? 1.0 : -1.0;
  const double h = packet.sqrt_gamma() / 50.0;
  double a = packet.p0;
  double ga = g0;
  double b = a;
  double gb = ga;
  bool found = false;
  for (int i = 0; i < 50 * 12; ++i) {
    b = a + dir * h;
    if (b <= 0.0) break;
    gb = g(b);
    if ((ga < 0.0) != (gb < 0.0)) {
      found = true;
      break;
    }
    a = b;
    ga = gb;
  }
  if (!found) throw DomainError("no real-axis saddle within 12 packet widths of p0");
  double lo = std::min(a, b);
  double hi = std::max(a, b);
  double glo = lo == a ? ga : gb;
  double ghi = hi == a ? ga : gb;
  std::uintmax_t iters = 200;
  const auto r = boost::math::tools::toms748_solve(g, lo, hi, glo, ghi,
                                                   boost::math::tools::eps_tolerance<double>(52), iters);
  const double p = 0.5 * (r.first + r.second);
  const double w = energy_of_momentum(p) - barrier.v_top;
  if (!(std::abs(w) < 1.0))
    throw DomainError("the saddle nearest p0 lies outside the tunnelling window (E - V = " + std::to_string(w) +
                      "); momentum filtering has pushed it over the barrier");
  return p;
}

SaddlePoint most_probable_saddle(const PacketSpec& packet, const BarrierSpec& barrier, const SaddleOptions& options) {
  const double pr = real_axis_saddle(packet, barrier);
  const double tr = phase_time(cplx{pr}, barrier, free_path(packet, barrier)).real();
  const SaddlePoint seed = solve_saddle(tr, cplx{pr}, packet, barrier, options);

  // Im p#(t), warm-started from the seed with an Euler predictor.
  auto im_p = [&](double t) {
    const cplx guess = seed.p + (t - tr) * seed.v / seed.Fpp;
    return solve_saddle(t, guess, packet, barrier, options).p.imag();
  };
  const double width = packet.sqrt_gamma() * std::abs(seed.Fpp) / std::abs(seed.v);
  double h = 0.05 * width;
  double flo = im_p(tr - h);
  double fhi = im_p(tr + h);
  for (int k = 0; k < 6 && !((flo > 0.0) && (fhi < 0.0)); ++k) {
    h *= 0.5;
    flo = im_p(tr - h);
    fhi = im_p(tr + h);
  }
  if (!((flo >= 0.0) && (fhi <= 0.0)))
    throw ConvergenceError("Im p# does not change sign around the real-axis saddle time", std::abs(flo));
  std::uintmax_t iters = 100;
  const auto r = boost::math::tools::toms748_solve(im_p, tr - h, tr + h, flo, fhi,
                                                   boost::math::tools::eps_tolerance<double>(50), iters);
  const double tmp = std::abs(im_p(r.first)) <= std::abs(im_p(r.second)) ? r.first : r.second;
  const cplx guess = seed.p + (tmp - tr) * seed.v / seed.Fpp;
  return solve_saddle(tmp, guess, packet, barrier, options);
}

namespace {

// Advances along p#(t) from `from` to each target (monotone in the sweep
// direction), appending converged points. Returns false on failure.
bool sweep(const SaddlePoint& from, const std::vector<double>& targets, const PacketSpec& packet,
           const BarrierSpec& barrier, double h0, const SaddleOptions& options, std::vector<SaddlePoint>& out,
           std::string& failure) {
  SaddlePoint cur = from;
  double h = h0;
  const double h_min = h0 * 1e-6;
  for (double target : targets) {
    while (cur.t != target) {
      const double remaining = target - cur.t;
      const double dir = remaining > 0.0 ? 1.0 : -1.0;
      const bool last = std::abs(remaining) <= h;
      const double tn = last ? target : cur.t + dir * h;
      const cplx dp = (tn - cur.t) * cur.v / cur.Fpp;
      const cplx pred = cur.p + dp;
      bool ok = false;
      SaddlePoint next;
      try {
        next = solve_saddle(tn, pred, packet, barrier, options);
        ok = std::abs(next.p - pred) <= 0.25 * std::abs(dp) + 1e-10;
      } catch (const Error&) {
        ok = false;
      }
      if (!ok) {
        h *= 0.5;
        if (h < h_min) {
          failure = "saddle continuation failed near t = " + std::to_string(cur.t);
          return false;
        }
        continue;
      }
      cur = next;
      if (next.iterations <= 3) h = std::min(h0, 1.5 * h);
    }
    out.push_back(cur);
  }
  return true;
}

}  // namespace

SaddleTrace continue_saddle(const SaddlePoint& start, const std::vector<double>& times, const PacketSpec& packet,
                            const BarrierSpec& barrier, double initial_step, const SaddleOptions& options) {
  std::vector<double> later, earlier;
  for (double t : times) (t >= start.t ? later : earlier).push_back(t);
  std::sort(later.begin(), later.end());
  std::sort(earlier.begin(), earlier.end(), std::greater<>());

  SaddleTrace trace;
  std::vector<SaddlePoint> fwd, bwd;
  std::string why;
  if (!sweep(start, later, packet, barrier, initial_step, options, fwd, why))
    trace.warnings.push_back(why + "; later times truncated");
  why.clear();
  if (!sweep(start, earlier, packet, barrier, initial_step, options, bwd, why))
    trace.warnings.push_back(why + "; earlier times truncated");
  std::reverse(bwd.begin(), bwd.end());
  trace.points = std::move(bwd);
  trace.points.insert(trace.points.end(), fwd.begin(), fwd.end());
  return trace;
}

Spinor sda_spinor(const SaddlePoint& s, const PacketSpec& packet, cplx& branch) {
  cplx pref = std::sqrt(2.0 * std::numbers::pi / (-kI * s.Fpp));
  if (branch != cplx{} && std::abs(pref - branch) > std::abs(pref + branch)) pref = -pref;
  branch = pref;
  const cplx psi0 = packet.K * pref * std::exp(kI * s.F);
  const Spinor u = free_spinor(s.p);
  return {psi0 * u.upper, psi0 * u.lower};
}

double sda_flux(const SaddlePoint& s, const PacketSpec& packet) {
  const cplx u1 = free_spinor(s.p).lower;
  return 4.0 * std::numbers::pi * packet.K * packet.K * u1.real() * std::exp(-2.0 * s.F.imag()) / std::abs(s.Fpp);
}

SdaResult sda_distribution(const std::vector<double>& times, const PacketSpec& packet, const BarrierSpec& barrier,
                           const SaddleOptions& options) {
  SdaResult r;
  r.most_probable = most_probable_saddle(packet, barrier, options);
  const SaddlePoint& mp = r.most_probable;
  const double width = packet.sqrt_gamma() * std::abs(mp.Fpp) / std::abs(mp.v);
  r.trace = continue_saddle(mp, times, packet, barrier, width / 20.0, options);
  if (r.trace.points.size() < 2)
    throw ConvergenceError("saddle continuation produced fewer than two points", 0.0);
  std::vector<double> t, P;
  t.reserve(r.trace.points.size());
  P.reserve(r.trace.points.size());
  for (const auto& s : r.trace.points) {
    t.push_back(s.t);
    P.push_back(sda_flux(s, packet));
  }
  r.distribution = TimeDistribution::from_density(std::move(t), std::move(P), 0.0, "sda");
  return r;
}

TauTrace tau_sharp_trace(const std::vector<double>& times, const PacketSpec& packet, const BarrierSpec& barrier) {
  const SdaResult sda = sda_distribution(times, packet, barrier);
  TauTrace out;
  out.t_mp = sda.most_probable.t;
  out.re_tau_mp = sda.most_probable.tau.real();
  out.warnings = sda.trace.warnings;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : sda.trace.points) {
    out.samples.push_back({s.t, s.tau.real(), s.tau.imag()});
    if (s.tau.imag() < best) {
      best = s.tau.imag();
      out.t_im_min = s.t;
    }
  }
  return out;
}

double TauMap::x(std::size_t ix) const {
  return nx > 1 ? re_lo + (re_hi - re_lo) * static_cast<double>(ix) / static_cast<double>(nx - 1) : re_lo;
}

double TauMap::y(std::size_t iy) const {
  return ny > 1 ? im_lo + (im_hi - im_lo) * static_cast<double>(iy) / static_cast<double>(ny - 1) : im_lo;
}

TauMap tau_contour_map(double re_lo, double re_hi, double im_lo, double im_hi, std::size_t nx, std::size_t ny,
                       const PacketSpec& packet, const BarrierSpec& barrier, double path_t0, double path_t1,
                       double path_spacing) {
  if (nx < 2 || ny < 2) throw ConfigError("taumap.resolution", "need at least 2 x 2 samples");
  TauMap m{re_lo, re_hi, im_lo, im_hi, nx, ny, std::vector<double>(nx * ny), {}, {}};
  const double D = free_path(packet, barrier);
  const auto rows = static_cast<std::ptrdiff_t>(ny);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t iy = 0; iy < rows; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      const cplx p{m.x(ix), m.y(static_cast<std::size_t>(iy))};
      double v = std::numeric_limits<double>::quiet_NaN();
      try {
        v = phase_time(p, barrier, D).real();
      } catch (const DegenerateInput&) {
      }
      m.re_tau[static_cast<std::size_t>(iy) * nx + ix] = v;
    }
  }
  std::vector<double> marks;
  for (double t = path_t0; t <= path_t1 + 1e-9; t += path_spacing) marks.push_back(t);
  const SaddlePoint mp = most_probable_saddle(packet, barrier);
  const double width = packet.sqrt_gamma() * std::abs(mp.Fpp) / std::abs(mp.v);
  const SaddleTrace tr = continue_saddle(mp, marks, packet, barrier, width / 20.0);
  for (const auto& s : tr.points) {
    m.path.push_back(s.p);
    m.path_times.push_back(s.t);
  }
  return m;
}

}  // namespace dtt
