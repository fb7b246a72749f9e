#include "kahler/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

namespace kahler {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (max_evals < 64) {
    throw std::invalid_argument("max_evals must be at least 64");
  }
  if (!(min_pole_distance >= 0.0)) {
    throw std::invalid_argument("min_pole_distance must be non-negative");
  }
}

namespace {

// Kronrod abscissae on [-1, 1]; odd indices are the 10-point Gauss nodes.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};

constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980622391, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

// Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

constexpr int kRulePoints = 21;

struct Segment {
  Interval iv;
  Edif value;
  double error = 0.0;
  double raw_error = 0.0;
  double floor = 0.0;
  std::size_t seq = 0;
};

struct ByError {
  bool operator()(const Segment& l, const Segment& r) const {
    if (l.error != r.error) {
      return l.error < r.error;
    }
    return l.seq > r.seq;
  }
};

// Neumaier-compensated summation of edifs.
class EdifSum {
 public:
  void add(const Edif& w) {
    add1(sum_.u, comp_.u, w.u);
    add1(sum_.v, comp_.v, w.v);
  }
  Edif total() const { return sum_ + comp_; }

 private:
  static void add1(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  Edif sum_;
  Edif comp_;
};

}  // namespace

RuleEstimate gauss_kronrod21(const std::function<Edif(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Edif fc = f(center);
  Edif kron = Edif{kWgk[10]} * fc;
  Edif gauss;
  double abs_sum = kWgk[10] * modulus(fc);
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const Edif f1 = f(center - dx);
    const Edif f2 = f(center + dx);
    const Edif pair = f1 + f2;
    kron = kron + Edif{kWgk[static_cast<std::size_t>(j)]} * pair;
    abs_sum += kWgk[static_cast<std::size_t>(j)] * (modulus(f1) + modulus(f2));
    if (j % 2 == 1) {
      gauss = gauss + Edif{kWg[static_cast<std::size_t>(j / 2)]} * pair;
    }
  }
  const double w = std::abs(half);
  return {Edif{half} * kron, Edif{half} * gauss, w * abs_sum};
}

QuadratureResult adaptive_integrate(std::span<const Interval> seeds, const PieceIntegrand& f,
                                    const QuadratureConfig& cfg) {
  cfg.validate();
  constexpr double kEps = std::numeric_limits<double>::epsilon();

  QuadratureResult result;
  std::size_t seq = 0;
  auto evaluate = [&](const Interval& iv) {
    if (result.evals + kRulePoints > cfg.max_evals) {
      throw BudgetExceeded("quadrature exceeded " + std::to_string(cfg.max_evals) +
                           " integrand evaluations before reaching tolerance");
    }
    result.evals += kRulePoints;
    const RuleEstimate est =
        gauss_kronrod21([&](double t) { return f(iv.piece, t); }, iv.a, iv.b);
    Segment s;
    s.iv = iv;
    s.value = est.kronrod;
    s.raw_error = modulus(est.kronrod - est.gauss);
    s.floor = 50.0 * kEps * est.abs_integral;
    s.error = std::max(s.raw_error, s.floor);
    s.seq = seq++;
    return s;
  };

  std::priority_queue<Segment, std::vector<Segment>, ByError> active;
  std::vector<Segment> retired;
  Edif value;
  double error = 0.0;
  for (const Interval& iv : seeds) {
    Segment s = evaluate(iv);
    value = value + s.value;
    error += s.error;
    active.push(s);
  }

  auto recompute = [&] {
    EdifSum sum;
    double err = 0.0;
    std::vector<Segment> all(retired);
    auto copy = active;
    while (!copy.empty()) {
      all.push_back(copy.top());
      copy.pop();
    }
    std::sort(all.begin(), all.end(), [](const Segment& l, const Segment& r) {
      return l.iv.piece != r.iv.piece ? l.iv.piece < r.iv.piece : l.iv.a < r.iv.a;
    });
    for (const Segment& s : all) {
      sum.add(s.value);
      err += s.error;
    }
    value = sum.total();
    error = err;
  };

  const auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * modulus(value)); };

  while (!active.empty()) {
    if (error <= tolerance()) {
      recompute();
      if (error <= tolerance()) {
        break;
      }
    }
    Segment worst = active.top();
    active.pop();
    const double mid = 0.5 * (worst.iv.a + worst.iv.b);
    const bool too_narrow = !(mid > std::min(worst.iv.a, worst.iv.b) &&
                              mid < std::max(worst.iv.a, worst.iv.b));
    if (worst.raw_error <= worst.floor || too_narrow) {
      retired.push_back(worst);
      continue;
    }
    Segment left = evaluate({worst.iv.piece, worst.iv.a, mid});
    Segment right = evaluate({worst.iv.piece, mid, worst.iv.b});
    value = value - worst.value + left.value + right.value;
    error += left.error + right.error - worst.error;
    active.push(left);
    active.push(right);
  }
  recompute();
  result.value = value;
  result.abs_error = error;
  return result;
}

}  // namespace kahler
