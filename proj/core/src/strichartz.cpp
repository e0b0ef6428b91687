#include "nlslab/strichartz.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "nlslab/parallel.hpp"
#include "nlslab/solver.hpp"

namespace nlslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

class ArcSet {
 public:
  ArcSet() { pieces_.push_back({0.0, kTwoPi}); }

  // Intersects with {phi : cos(phi - phi0) >= t}.
  void intersect(double phi0, double t) {
    if (pieces_.empty() || t <= -1.0) return;
    if (t > 1.0) {
      pieces_.clear();
      return;
    }
    const double w = std::acos(t);
    double s = std::fmod(phi0 - w, kTwoPi);
    if (s < 0.0) s += kTwoPi;
    const double e = s + 2.0 * w;
    std::array<std::pair<double, double>, 2> arc{{{s, std::min(e, kTwoPi)}, {0.0, e - kTwoPi}}};
    const int count = e > kTwoPi ? 2 : 1;

    std::vector<std::pair<double, double>> next;
    for (const auto& [a, b] : pieces_)
      for (int i = 0; i < count; ++i) {
        const double lo = std::max(a, arc[i].first), hi = std::min(b, arc[i].second);
        if (hi > lo) next.push_back({lo, hi});
      }
    pieces_ = std::move(next);
  }

  void clear() { pieces_.clear(); }

  double measure() const {
    double m = 0.0;
    for (const auto& [a, b] : pieces_) m += b - a;
    return m;
  }

 private:
  std::vector<std::pair<double, double>> pieces_;
};

constexpr double kHalfPi = 0.5 * std::numbers::pi;
constexpr double kPi = std::numbers::pi;

// Support box of xi = xi1 + xi2 and range of r = |xi1 - xi2| / 2.
struct Support {
  Rect xi;
  double r0 = 0.0, r1 = 0.0;
};

Support support_of(const BilinearSetup& s) {
  Support out;
  out.xi = {s.r1.x0 + s.r2.x0, s.r1.x1 + s.r2.x1, s.r1.y0 + s.r2.y0, s.r1.y1 + s.r2.y1};
  const Rect d{s.r1.x0 - s.r2.x1, s.r1.x1 - s.r2.x0, s.r1.y0 - s.r2.y1, s.r1.y1 - s.r2.y0};
  const double nx = std::clamp(0.0, d.x0, d.x1), ny = std::clamp(0.0, d.y0, d.y1);
  const double fx = std::max(std::abs(d.x0), std::abs(d.x1)), fy = std::max(std::abs(d.y0), std::abs(d.y1));
  out.r0 = 0.5 * std::hypot(nx, ny);
  out.r1 = 0.5 * std::hypot(fx, fy);
  return out;
}

// Composite Gauss-Legendre nodes and weights on [a, b].
void composite_rule(double a, double b, int panels, std::vector<double>& x, std::vector<double>& w) {
  using Rule = boost::math::quadrature::gauss<double, 8>;
  const auto& abs = Rule::abscissa();
  const auto& wts = Rule::weights();
  x.clear();
  w.clear();
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h, half = 0.5 * h;
    for (std::size_t i = 0; i < abs.size(); ++i) {
      if (abs[i] == 0.0) {
        x.push_back(mid);
        w.push_back(wts[i] * half);
        continue;
      }
      x.push_back(mid - half * abs[i]);
      w.push_back(wts[i] * half);
      x.push_back(mid + half * abs[i]);
      w.push_back(wts[i] * half);
    }
  }
}

}  // namespace

BilinearSetup extremizer_setup(double N1, double N2, double theta) {
  BilinearSetup s;
  s.theta = theta;
  s.r1 = {N1 - theta * N2, N1 + theta * N2, -theta * N1, theta * N1};
  s.r2 = {-theta * N2, theta * N2, N2 - theta * N1, N2 + theta * N1};
  return s;
}

double arc_measure(const BilinearSetup& setup, const Vec2& xi, double r) {
  if (!(r > 0.0)) return 0.0;
  const double cx = 0.5 * xi[0], cy = 0.5 * xi[1];
  ArcSet arcs;
  // xi1 = c + r e(phi) in r1
  arcs.intersect(0.0, (setup.r1.x0 - cx) / r);
  arcs.intersect(kPi, (cx - setup.r1.x1) / r);
  arcs.intersect(kHalfPi, (setup.r1.y0 - cy) / r);
  arcs.intersect(-kHalfPi, (cy - setup.r1.y1) / r);
  // xi2 = c - r e(phi) in r2
  arcs.intersect(kPi, (setup.r2.x0 - cx) / r);
  arcs.intersect(0.0, (cx - setup.r2.x1) / r);
  arcs.intersect(-kHalfPi, (setup.r2.y0 - cy) / r);
  arcs.intersect(kHalfPi, (cy - setup.r2.y1) / r);

  if (setup.angular) {
    // xi1 . xi2 = |c|^2 - r^2 and |xi1|^2 |xi2|^2 = (|c|^2 + r^2)^2 - 4 r^2 (c . e)^2.
    const double c2 = cx * cx + cy * cy;
    const double D = c2 - r * r, S = c2 + r * r;
    const double th2 = setup.theta * setup.theta;
    if (c2 == 0.0) {
      if (D * D > th2 * S * S) arcs.clear();
    } else {
      const double Q = (S * S - D * D / th2) / (4.0 * r * r);
      if (Q < 0.0) {
        arcs.clear();
      } else {
        const double beta = std::sqrt(Q / c2);
        if (beta < 1.0) {
          const double phic = std::atan2(cy, cx);
          arcs.intersect(phic, -beta);
          arcs.intersect(phic + kPi, -beta);
        }
      }
    }
  }
  return arcs.measure();
}

double bilinear_norm_sq(const BilinearSetup& setup, int panels) {
  if (panels < 1) throw std::invalid_argument("bilinear_norm_sq: panels must be >= 1");
  const Support sup = support_of(setup);
  std::vector<double> xs, wx, ys, wy, rs, wr;
  composite_rule(sup.xi.x0, sup.xi.x1, panels, xs, wx);
  composite_rule(sup.xi.y0, sup.xi.y1, panels, ys, wy);
  composite_rule(sup.r0, sup.r1, panels, rs, wr);

  std::vector<double> rows(xs.size(), 0.0);
  parallel_for(xs.size(), [&](std::size_t i) {
    KahanSum acc;
    for (std::size_t j = 0; j < ys.size(); ++j) {
      double inner = 0.0;
      for (std::size_t k = 0; k < rs.size(); ++k) {
        const double A = arc_measure(setup, {xs[i], ys[j]}, rs[k]);
        inner += wr[k] * rs[k] * A * A;
      }
      acc.add(wy[j] * inner);
    }
    rows[i] = wx[i] * acc.value();
  });
  return std::pow(kTwoPi, 3) * 0.25 * ordered_sum(rows);
}

BilinearNorm bilinear_norm(const BilinearSetup& setup, int panels, double tolerance) {
  BilinearNorm out;
  out.coarse_norm_sq = bilinear_norm_sq(setup, panels);
  out.norm_sq = bilinear_norm_sq(setup, 2 * panels);
  const double denom = std::max(std::abs(out.norm_sq), std::abs(out.coarse_norm_sq));
  out.rel_change = denom > 0.0 ? std::abs(out.norm_sq - out.coarse_norm_sq) / denom : 0.0;
  const double data = setup.r1.area() * setup.r2.area() / std::pow(kTwoPi, 4);
  out.ratio = data > 0.0 ? std::sqrt(out.norm_sq / data) : 0.0;
  if (out.rel_change > tolerance)
    throw NumericalFailure("bilinear_norm: quadrature refinement changed the value by " +
                           std::to_string(100.0 * out.rel_change) + "%");
  return out;
}

MonteCarloEstimate bilinear_norm_monte_carlo(const BilinearSetup& setup, std::uint64_t samples, std::uint64_t seed,
                                             double epsilon) {
  constexpr int kShards = 64;
  std::vector<double> sum(kShards, 0.0), sum_sq(kShards, 0.0);
  const double th2 = setup.theta * setup.theta;
  auto angle_ok = [&](const Vec2& a, const Vec2& b) {
    if (!setup.angular) return true;
    const double d = a[0] * b[0] + a[1] * b[1];
    return d * d <= th2 * (a[0] * a[0] + a[1] * a[1]) * (b[0] * b[0] + b[1] * b[1]);
  };
  parallel_for(kShards, [&](std::size_t j) {
    std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ULL + j);
    auto unit = [&rng] { return static_cast<double>(rng() >> 11) * 0x1p-53; };
    auto draw = [&](const Rect& R) { return Vec2{R.x0 + (R.x1 - R.x0) * unit(), R.y0 + (R.y1 - R.y0) * unit()}; };
    const std::uint64_t begin = samples * j / kShards, end = samples * (j + 1) / kShards;
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Vec2 a = draw(setup.r1), b = draw(setup.r2), a2 = draw(setup.r1);
      const Vec2 b2{a[0] + b[0] - a2[0], a[1] + b[1] - a2[1]};
      if (!setup.r2.contains(b2) || !angle_ok(a, b) || !angle_ok(a2, b2)) continue;
      const double phase = (a[0] * a[0] + a[1] * a[1] + b[0] * b[0] + b[1] * b[1]) -
                           (a2[0] * a2[0] + a2[1] * a2[1] + b2[0] * b2[0] + b2[1] * b2[1]);
      const double k = std::max(0.0, 1.0 - std::abs(phase) / epsilon) / epsilon;
      s += k;
      s2 += k * k;
    }
    sum[j] = s;
    sum_sq[j] = s2;
  });
  const double n = static_cast<double>(samples);
  const double mean = ordered_sum(sum) / n;
  const double var = std::max(0.0, ordered_sum(sum_sq) / n - mean * mean);
  const double vol = setup.r1.area() * setup.r2.area() * setup.r1.area();
  const double scale = std::pow(kTwoPi, 3) * vol;
  MonteCarloEstimate out;
  out.samples = samples;
  out.norm_sq = scale * mean;
  out.std_error = scale * std::sqrt(var / n);
  return out;
}

}  // namespace nlslab
