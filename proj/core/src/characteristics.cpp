#include "dgh/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <sstream>

namespace dgh {

// ---------------------------------------------------------------------------
// SignedLog

SignedLog SignedLog::of(double v) noexcept { return weighted(0.0, v); }

SignedLog SignedLog::weighted(double log_weight, double v) noexcept {
  SignedLog s;
  if (v == 0.0) return s;
  s.sign = v > 0.0 ? 1 : -1;
  s.log_magnitude = log_weight + std::log(std::abs(v));
  return s;
}

std::optional<double> SignedLog::value() const noexcept {
  if (sign == 0) return 0.0;
  if (log_magnitude > 709.0) return std::nullopt;
  return sign * std::exp(log_magnitude);
}

bool SignedLog::operator<(const SignedLog& other) const noexcept {
  if (sign != other.sign) return sign < other.sign;
  if (sign == 0) return false;
  return sign > 0 ? log_magnitude < other.log_magnitude : log_magnitude > other.log_magnitude;
}

// ---------------------------------------------------------------------------
// Pointwise quantities

WeightedAB weighted_AB(const PathPoint& p, const Parameters& params) {
  const double alpha = params.alpha();
  const double k = params.k();
  const double drift = (k - params.lambda()) * p.t;
  const double base = (p.u + k) / alpha;
  WeightedAB out;
  out.A = SignedLog::weighted((p.q + drift) / alpha, base - p.g);
  out.B = SignedLog::weighted((-p.q - drift) / alpha, base + p.g);
  out.overflow = !out.A.value() || !out.B.value();
  return out;
}

PlainAB plain_AB(const PathPoint& p, const Parameters& params) {
  const double base = (p.u + params.k()) / params.alpha();
  PlainAB out{base - p.g, base + p.g, std::nullopt};
  const double prod = out.A * out.B;
  if (prod < 0.0) out.h = std::sqrt(-prod);
  return out;
}

double momentum_residual(const PathPoint& p, double m0_at_seed, const Parameters& params) {
  const double k = params.k();
  return (m0_at_seed + k) - (p.m + k) * p.q_x * p.q_x;
}

double rho_invariant_residual(const PathPoint& p, double rho0_at_seed) {
  if (!p.rho_tilde) throw InvalidArgument("rho_invariant_residual needs a two-component run");
  return (*p.rho_tilde + 1.0) * p.q_x - (rho0_at_seed + 1.0);
}

// ---------------------------------------------------------------------------
// Advection

namespace {

struct Frame {
  double t = 0.0;
  Spectrum u, u_t, rho, rho_t, p;
  bool two = false;
};

Frame make_frame(double t, std::span<const double> u, std::span<const double> rho,
                 const RightHandSide& rhs) {
  const Spectral& sp = rhs.op().spectral();
  RightHandSide::Evaluation ev;
  rhs.evaluate(u, rho, ev);
  Frame f;
  f.t = t;
  f.two = !rho.empty();
  f.u = sp.analyse(u);
  f.u_t = sp.analyse(ev.u_t);
  f.p = sp.analyse(ev.nonlocal);
  if (f.two) {
    f.rho = sp.analyse(rho);
    f.rho_t = sp.analyse(ev.rho_t);
  }
  return f;
}

Frame frame_of(const Record& r, const RightHandSide& rhs) {
  std::span<const double> rho;
  if (r.state.rho_tilde) rho = r.state.rho_tilde->values();
  return make_frame(r.state.t, r.state.u.values(), rho, rhs);
}

// Cubic Hermite midpoint from endpoint values and time derivatives.
std::vector<double> hermite_mid(const Spectral& sp, const Spectrum& a, const Spectrum& a_t,
                                const Spectrum& b, const Spectrum& b_t, double dt) {
  Spectrum c(a.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    c[k] = 0.5 * (a[k] + b[k]) + dt / 8.0 * (a_t[k] - b_t[k]);
  }
  return sp.synthesise(c);
}

Frame midpoint_frame(const Frame& a, const Frame& b, const RightHandSide& rhs) {
  const Spectral& sp = rhs.op().spectral();
  const double dt = b.t - a.t;
  const std::vector<double> u = hermite_mid(sp, a.u, a.u_t, b.u, b.u_t, dt);
  std::vector<double> rho;
  if (a.two) rho = hermite_mid(sp, a.rho, a.rho_t, b.rho, b.rho_t, dt);
  return make_frame(0.5 * (a.t + b.t), u, rho, rhs);
}

struct Flow {
  double q, q_x, g;
};

class Sampler {
 public:
  explicit Sampler(const NonlocalOperator& op)
      : sp_(op.spectral()),
        alpha2_(op.params().alpha() * op.params().alpha()),
        k_(op.params().k()),
        lambda_(op.params().lambda()),
        sigma_(op.params().sigma()) {}

  Flow rate(const Frame& f, const Flow& s) const {
    const Spectrum* spectra[3] = {&f.u, &f.p, &f.rho};
    const int orders[3] = {0, 0, 0};
    double v[3] = {0.0, 0.0, 0.0};
    const std::size_t count = f.two ? 3 : 2;
    sp_.evaluate_many(std::span(spectra, count), std::span(orders, count), s.q,
                      std::span(v, count));
    const double u = v[0];
    double local = u * u + 2.0 * k_ * u;
    if (f.two) local += sigma_ * (0.5 * v[2] * v[2] + v[2]);
    return {u + lambda_, s.g * s.q_x, -0.5 * s.g * s.g + (local - v[1]) / alpha2_};
  }

  PathPoint point(const Frame& f, const Flow& s) const {
    const Spectrum* spectra[4] = {&f.u, &f.u, &f.u, &f.rho};
    const int orders[4] = {0, 1, 2, 0};
    double v[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t count = f.two ? 4 : 3;
    sp_.evaluate_many(std::span(spectra, count), std::span(orders, count), s.q,
                      std::span(v, count));
    PathPoint p;
    p.t = f.t;
    p.q = s.q;
    p.q_x = s.q_x;
    p.g = s.g;
    p.u = v[0];
    p.u_x_field = v[1];
    p.m = v[0] - alpha2_ * v[2];
    if (f.two) p.rho_tilde = v[3];
    return p;
  }

  double slope(const Frame& f, double x) const { return sp_.evaluate(f.u, x, 1); }

 private:
  const Spectral& sp_;
  double alpha2_, k_, lambda_, sigma_;
};

Flow axpy(const Flow& s, double h, const Flow& r) {
  return {s.q + h * r.q, s.q_x + h * r.q_x, s.g + h * r.g};
}

Flow rk4(const Sampler& smp, const Frame& a, const Frame& mid, const Frame& b, const Flow& s) {
  const double dt = b.t - a.t;
  const Flow k1 = smp.rate(a, s);
  const Flow k2 = smp.rate(mid, axpy(s, 0.5 * dt, k1));
  const Flow k3 = smp.rate(mid, axpy(s, 0.5 * dt, k2));
  const Flow k4 = smp.rate(b, axpy(s, dt, k3));
  return {s.q + dt / 6.0 * (k1.q + 2.0 * k2.q + 2.0 * k3.q + k4.q),
          s.q_x + dt / 6.0 * (k1.q_x + 2.0 * k2.q_x + 2.0 * k3.q_x + k4.q_x),
          s.g + dt / 6.0 * (k1.g + 2.0 * k2.g + 2.0 * k3.g + k4.g)};
}

struct Tracker {
  CharacteristicPath path;
  Flow flow;
  double m0 = 0.0;
  double rho0 = 0.0;
  bool active = true;
};

}  // namespace

std::vector<CharacteristicPath> advect_many(const Trajectory& trajectory,
                                            std::span<const double> seeds,
                                            const NonlocalOperator& op) {
  const std::span<const Record> records = trajectory.pre_blowup();
  std::vector<Tracker> trackers(seeds.size());
  if (records.empty()) {
    for (std::size_t s = 0; s < seeds.size(); ++s) {
      trackers[s].path.seed = seeds[s];
      trackers[s].path.truncated = true;
      trackers[s].path.warning = "no pre-blowup records";
    }
  }

  const Parameters& prm = op.params();
  const Grid& grid = op.grid();
  const double lo = -grid.half_length() + 2.0 * prm.alpha();
  const double hi = grid.half_length() - 2.0 * prm.alpha();
  const bool density_invariant =
      !records.empty() && records.front().state.two_component() && prm.gamma() == 0.0;
  const RightHandSide rhs(op);
  const Sampler smp(op);

  auto emit = [&](Tracker& tr, const Frame& f) {
    const PathPoint p = smp.point(f, tr.flow);
    if (tr.path.points.empty()) {
      tr.m0 = p.m;
      if (p.rho_tilde) tr.rho0 = *p.rho_tilde;
    }
    tr.path.points.push_back(p);
    tr.path.weighted.push_back(weighted_AB(p, prm));
    tr.path.plain.push_back(plain_AB(p, prm));
    tr.path.momentum_residuals.push_back(momentum_residual(p, tr.m0, prm));
    if (density_invariant) tr.path.rho_residuals.push_back(rho_invariant_residual(p, tr.rho0));
  };

  if (records.empty()) {
    std::vector<CharacteristicPath> out;
    for (auto& tr : trackers) out.push_back(std::move(tr.path));
    return out;
  }

  Frame current = frame_of(records.front(), rhs);
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    Tracker& tr = trackers[s];
    tr.path.seed = seeds[s];
    tr.flow = {seeds[s], 1.0, smp.slope(current, seeds[s])};
    emit(tr, current);
    if (!(seeds[s] >= lo && seeds[s] < hi)) {
      tr.active = false;
      tr.path.truncated = true;
      std::ostringstream msg;
      msg << "seed " << seeds[s] << " lies within 2 alpha of the box edge";
      tr.path.warning = msg.str();
    }
  }

  for (std::size_t i = 1; i < records.size(); ++i) {
    if (std::none_of(trackers.begin(), trackers.end(), [](const Tracker& t) { return t.active; })) {
      break;
    }
    Frame next = frame_of(records[i], rhs);
    const Frame mid = midpoint_frame(current, next, rhs);
    for (Tracker& tr : trackers) {
      if (!tr.active) continue;
      const Flow stepped = rk4(smp, current, mid, next, tr.flow);
      if (!(stepped.q >= lo && stepped.q < hi) || !std::isfinite(stepped.g) ||
          !std::isfinite(stepped.q_x)) {
        tr.active = false;
        tr.path.truncated = true;
        std::ostringstream msg;
        msg << "characteristic from " << tr.path.seed << " reached the boundary band at t = "
            << next.t;
        tr.path.warning = msg.str();
        continue;
      }
      tr.flow = stepped;
      emit(tr, next);
    }
    current = std::move(next);
  }

  std::vector<CharacteristicPath> out;
  out.reserve(trackers.size());
  for (auto& tr : trackers) out.push_back(std::move(tr.path));
  return out;
}

CharacteristicPath advect(const Trajectory& trajectory, double x0, const NonlocalOperator& op) {
  const double seeds[1] = {x0};
  return std::move(advect_many(trajectory, seeds, op).front());
}

// ---------------------------------------------------------------------------
// Path properties

namespace {

void note(PathCheck& c, double excess, double t) {
  ++c.checked;
  if (excess > 0.0) c.passed = false;
  if (!c.at_time || excess > c.worst_excess) {
    c.worst_excess = excess;
    c.at_time = t;
  }
}

// Excess of (lower - upper) beyond tolerance for signed-log values.
double log_excess(const SignedLog& lower, const SignedLog& upper, double rel) {
  const auto lv = lower.value();
  const auto uv = upper.value();
  if (lv && uv) return (*lv - *uv) - rel * (1.0 + std::abs(*lv));
  if (lower.sign == upper.sign && lower.sign != 0) {
    const double d = lower.log_magnitude - upper.log_magnitude;
    return (lower.sign > 0 ? d : -d) - rel;
  }
  return upper < lower ? 1.0 : -1.0;
}

constexpr double kMonotoneTol = 1e-8;
constexpr double kFloor = 1e-10;

}  // namespace

PathCheck check_ab_monotone(const CharacteristicPath& path) {
  PathCheck c;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& a = path.weighted[i];
    const auto& b = path.weighted[i + 1];
    const double t = path.points[i + 1].t;
    note(c, log_excess(a.A, b.A, kMonotoneTol), t);
    note(c, log_excess(b.B, a.B, kMonotoneTol), t);
  }
  return c;
}

PathCheck check_plain_ab_monotone(const CharacteristicPath& path) {
  PathCheck c;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& a = path.plain[i];
    const auto& b = path.plain[i + 1];
    const double t = path.points[i + 1].t;
    note(c, a.A - b.A - kMonotoneTol * (1.0 + std::abs(a.A)), t);
    note(c, b.B - a.B - kMonotoneTol * (1.0 + std::abs(a.B)), t);
  }
  return c;
}

PathCheck check_sign_persistence(const CharacteristicPath& path) {
  PathCheck c;
  if (path.size() == 0) return c;
  const auto& first = path.weighted.front();
  if (!(first.A.sign > 0 && first.B.sign < 0)) return c;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const auto& w = path.weighted[i];
    const bool ok = w.A.sign > 0 && w.B.sign < 0;
    note(c, ok ? -1.0 : 1.0, path.points[i].t);
  }
  return c;
}

PathCheck check_slope_decrease(const CharacteristicPath& path) {
  PathCheck c;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const double g0 = path.points[i].g;
    const double g1 = path.points[i + 1].g;
    note(c, g1 - g0 - (kFloor + kMonotoneTol * std::abs(g0)), path.points[i + 1].t);
  }
  return c;
}

PathCheck check_riccati(const CharacteristicPath& path, const Parameters& params) {
  PathCheck c;
  const double a2 = params.alpha() * params.alpha();
  const double k = params.k();
  auto bound = [&](const PathPoint& p) {
    return 0.5 * (-p.g * p.g + (p.u + k) * (p.u + k) / a2);
  };
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const PathPoint& p0 = path.points[i];
    const PathPoint& p1 = path.points[i + 1];
    const double dt = p1.t - p0.t;
    const double secant = (p1.g - p0.g) / dt;
    const double r0 = bound(p0);
    const double r1 = bound(p1);
    const double scale = std::max({std::abs(r0), std::abs(r1), std::abs(secant)});
    const double tol = kFloor + 1e-6 * scale;
    note(c, secant - std::max(r0, r1) - tol, p1.t);
  }
  return c;
}

PathCheck check_h_growth(const CharacteristicPath& path) {
  PathCheck c;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const auto& h0 = path.plain[i].h;
    const auto& h1 = path.plain[i + 1].h;
    if (!h0 || !h1) continue;
    const double dt = path.points[i + 1].t - path.points[i].t;
    const double secant = (*h1 - *h0) / dt;
    const double lower = 0.5 * *h0 * *h0;
    const double tol = kFloor + 1e-6 * std::max(std::abs(secant), lower);
    note(c, lower - secant - tol, path.points[i + 1].t);
  }
  return c;
}

PathCheck check_q_ordering(std::span<const CharacteristicPath> paths) {
  PathCheck c;
  std::vector<const CharacteristicPath*> sorted;
  for (const auto& p : paths) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->seed < b->seed; });
  for (std::size_t j = 0; j + 1 < sorted.size(); ++j) {
    const auto& left = *sorted[j];
    const auto& right = *sorted[j + 1];
    const std::size_t n = std::min(left.size(), right.size());
    for (std::size_t i = 0; i < n; ++i) {
      note(c, left.points[i].q - right.points[i].q + (left.seed < right.seed ? 0.0 : -1.0),
           left.points[i].t);
    }
  }
  return c;
}

}  // namespace dgh
