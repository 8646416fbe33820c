#include "lpocv/selection.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <map>
#include <thread>

#include "lpocv/errors.hpp"
#include "lpocv/lpo.hpp"

namespace lpocv {

const char* collection_kind_name(CollectionKind k) noexcept {
  switch (k) {
    case CollectionKind::Pc: return "pc";
    case CollectionKind::Pp: return "pp";
    case CollectionKind::Tp: return "tp";
    case CollectionKind::Custom: return "custom";
  }
  return "unknown";
}

double regularity_bound(std::size_t n, double phi) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "regularity bound needs n >= 2");
  const double log_n = std::log(static_cast<double>(n));
  return phi * static_cast<double>(n) / (log_n * log_n);
}

Collection build_collection(CollectionKind kind, std::size_t n, const CollectionParams& params) {
  if (n < 2) fail(ErrorCode::InvalidArgument, "collections need n >= 2");
  if (!(params.phi > 0.0)) fail(ErrorCode::InvalidArgument, "Phi must be positive");
  double bound = regularity_bound(n, params.phi);
  if (params.max_dim) bound = std::min(bound, static_cast<double>(*params.max_dim));
  const auto cap = static_cast<std::size_t>(std::floor(bound));

  Collection c;
  c.kind = kind;
  c.params = params;
  switch (kind) {
    case CollectionKind::Pc: {
      if (cap < 1) fail(ErrorCode::Infeasible, "n too small for Phi: no histogram satisfies the dimension bound");
      for (std::size_t d = 1; d <= cap; ++d) c.models.push_back(Model::histogram(d));
      c.max_dim = cap;
      c.levels = cap;
      break;
    }
    case CollectionKind::Pp: {
      const unsigned r = params.degree_bound;
      if (r == 0) fail(ErrorCode::InvalidArgument, "degree bound r must be >= 1");
      if (r > cap) fail(ErrorCode::Infeasible, "n too small for Phi: r exceeds the dimension bound");
      unsigned depth = 0;
      while (static_cast<std::size_t>(r) << (depth + 1) <= cap && depth < 20) ++depth;
      for (unsigned m = 0; m <= depth; ++m) c.models.push_back(Model::piecewise_polynomial(m, r));
      c.levels = depth;
      c.max_dim = static_cast<std::size_t>(r) << depth;
      break;
    }
    case CollectionKind::Tp: {
      if (cap < 1) fail(ErrorCode::Infeasible, "n too small for Phi: no trigonometric model fits the bound");
      const std::size_t top = (cap - 1) / 2;
      for (std::size_t k = 0; k <= top; ++k) c.models.push_back(Model::trigonometric(k));
      c.levels = top;
      c.max_dim = 2 * top + 1;
      break;
    }
    case CollectionKind::Custom:
      fail(ErrorCode::InvalidArgument, "custom collections are built with make_collection");
  }
  return c;
}

Collection make_collection(std::vector<Model> models, double phi) {
  if (models.empty()) fail(ErrorCode::InvalidArgument, "collection is empty");
  Collection c;
  c.kind = CollectionKind::Custom;
  c.params.phi = phi;
  for (const auto& m : models) c.max_dim = std::max(c.max_dim, m.dim());
  c.models = std::move(models);
  return c;
}

AssumptionReport check_assumptions(const Collection& collection, std::size_t n, std::optional<double> density_min) {
  AssumptionReport r;
  r.phi = collection.params.phi;
  r.reg_bound = regularity_bound(n, r.phi);
  std::map<std::size_t, std::size_t> per_dim;
  bool all_histograms = !collection.models.empty();
  for (const auto& m : collection.models) {
    r.max_phi_sup = std::max(r.max_phi_sup, m.phi_sup());
    // Partition bases certify (Reg2) through (Reg): sup |sum a phi| is read as sqrt(sup phi_m).
    const bool partition = m.family() == Family::Histogram || m.family() == Family::HaarScaling ||
                           m.family() == Family::PiecewisePolynomial;
    const double reg2 = partition ? std::sqrt(m.phi_sup()) : m.coefficient_sup_bound();
    r.max_coefficient_sup = std::max(r.max_coefficient_sup, reg2);
    r.max_reg3_ratio = std::max(r.max_reg3_ratio, m.phi_sup() / static_cast<double>(m.dim()));
    ++per_dim[m.dim()];
    all_histograms = all_histograms && m.is_indicator_partition();
  }
  r.reg_ok = r.max_phi_sup <= r.reg_bound;
  r.reg2_ok = r.max_coefficient_sup <= std::sqrt(r.reg_bound);
  r.reg3_ok = r.max_reg3_ratio <= r.phi;

  r.pol_ok = true;
  r.pol_delta = 0.0;
  for (const auto& [dim, count] : per_dim) {
    r.max_models_per_dim = std::max(r.max_models_per_dim, count);
    if (count <= 1) continue;
    if (dim == 1) {
      r.pol_ok = false;  // 1^delta = 1 < count for every delta
      continue;
    }
    r.pol_delta = std::max(r.pol_delta, std::log(static_cast<double>(count)) / std::log(static_cast<double>(dim)));
  }

  if (density_min && *density_min > 0.0 && all_histograms) {
    r.ad = AdStatus::VerifiedSufficientCondition;
    r.density_lower_bound = *density_min;
  }
  return r;
}

double zeta_of(double eps) { return 1.0 - std::pow(1.0 + eps, -8.0); }

bool epsilon_valid(std::size_t n, double eps) {
  if (!(eps > 0.0 && eps < 1.0) || n < 3) return false;
  const double nd = static_cast<double>(n);
  const double z = zeta_of(eps);
  if (!(z > 2.0 / (nd - 1.0))) return false;
  const double lhs = 4.0 * z / (1.0 + 3.0 * z) + 2.0 / nd;
  const double rhs = 1.0 - 2.0 / (z * (nd - 1.0) - 2.0);
  return lhs < rhs && rhs < 1.0;
}

std::optional<EpsilonSolution> solve_epsilon(std::size_t n) {
  if (n < 3) return std::nullopt;
  const double nd = static_cast<double>(n);
  // With zeta = delta + 2/(n-1), the target inequality is equivalent to
  // a delta^2 - b delta + c < 0 for delta > 0.
  const double a = (nd + 6.0) / nd;
  const double b = (nd * nd - 11.0 * nd - 10.0) / (nd * (nd - 1.0));
  const double c = 2.0 * (nd + 5.0) / ((nd - 1.0) * (nd - 1.0));
  const double disc = b * b - 4.0 * a * c;
  if (!(disc > 0.0)) return std::nullopt;
  const double root = std::sqrt(disc);
  double lo = (b - root) / (2.0 * a);
  double hi = (b + root) / (2.0 * a);
  // Feasible zeta must stay in (2/(n-1), zeta(1)) so that 0 < epsilon < 1.
  const double shift = 2.0 / (nd - 1.0);
  lo = std::max(lo, 0.0);
  hi = std::min(hi, zeta_of(1.0) - shift);
  if (!(lo < hi)) return std::nullopt;
  EpsilonSolution s;
  s.delta_lo = lo;
  s.delta_hi = hi;
  s.delta = 0.5 * (lo + hi);
  s.zeta = s.delta + shift;
  s.epsilon = std::pow(1.0 - s.zeta, -1.0 / 8.0) - 1.0;
  if (!epsilon_valid(n, s.epsilon)) return std::nullopt;
  return s;
}

PRange admissible_p_range(std::size_t n, double epsilon, double alpha, double beta) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) fail(ErrorCode::InvalidArgument, "epsilon must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 1.0) || !(beta > 0.0 && beta < 1.0)) {
    fail(ErrorCode::InvalidArgument, "margins alpha and beta must lie in (0,1)");
  }
  if (n < 3) fail(ErrorCode::InvalidArgument, "admissible range needs n >= 3");
  const double nd = static_cast<double>(n);
  PRange r;
  r.epsilon = epsilon;
  r.zeta = zeta_of(epsilon);
  r.alpha = alpha;
  r.beta = beta;
  if (!(r.zeta * (nd - 1.0) > 2.0)) fail(ErrorCode::Infeasible, "zeta(epsilon)(n-1) <= 2: no admissible range");
  const double z = r.zeta;
  r.lower = 4.0 * z / (1.0 + 3.0 * z) + (2.0 / nd) * (1.0 + z) / (1.0 + 3.0 * z) + alpha;
  r.upper = 1.0 - 2.0 / (z * (nd - 1.0) - 2.0) - beta;
  const double lo = std::ceil(nd * r.lower - 1e-9);
  const double hi = std::floor(nd * r.upper + 1e-9);
  const double lo_c = std::max(lo, 1.0);
  const double hi_c = std::min(hi, nd - 1.0);
  r.empty = !(lo_c <= hi_c);
  if (!r.empty) {
    r.p_lo = static_cast<std::size_t>(lo_c);
    r.p_hi = static_cast<std::size_t>(hi_c);
  }
  return r;
}

unsigned default_thread_count() {
  if (const char* env = std::getenv("LPOCV_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::vector<RiskPoint> risk_curve(const Collection& collection, const Sample& sample, std::size_t p, unsigned threads) {
  if (collection.models.empty()) fail(ErrorCode::InvalidArgument, "collection is empty");
  check_p(sample.size(), p);
  const std::size_t count = collection.models.size();
  std::vector<RiskPoint> curve(count);
  if (threads == 0) threads = default_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));

  auto evaluate = [&](std::size_t i) {
    const Model& m = collection.models[i];
    curve[i] = {i, m.name(), m.dim(), lpo_risk_closed(m, sample, p).value};
  };
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) evaluate(i);
    return curve;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) evaluate(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return curve;
}

SelectionResult select_model(const Collection& collection, const Sample& sample, std::size_t p, unsigned threads) {
  SelectionResult out;
  out.curve = risk_curve(collection, sample, p, threads);
  out.p = p;
  out.n = sample.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.curve.size(); ++i) {
    const auto& c = out.curve[i];
    const auto& b = out.curve[best];
    if (c.risk < b.risk || (c.risk == b.risk && c.dim < b.dim)) best = i;
  }
  out.chosen = best;
  out.tied = static_cast<std::size_t>(std::count_if(out.curve.begin(), out.curve.end(),
                                                    [&](const RiskPoint& r) { return r.risk == out.curve[best].risk; }));
  return out;
}

}  // namespace lpocv
