#include "randtensor/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "randtensor/linalg.hpp"

namespace rtensor {

std::string to_string(SpectralFunctional f) {
  switch (f) {
    case SpectralFunctional::L2Singular: return "l2singular";
    case SpectralFunctional::LdSingular: return "ldsingular";
    case SpectralFunctional::ZEig: return "zeig";
    case SpectralFunctional::HEig: return "heig";
    case SpectralFunctional::MEig: return "meig";
    case SpectralFunctional::CEig: return "ceig";
  }
  return "unknown";
}

SpectralFunctional parse_functional(std::string_view name) {
  for (auto f : {SpectralFunctional::L2Singular, SpectralFunctional::LdSingular, SpectralFunctional::ZEig,
                 SpectralFunctional::HEig, SpectralFunctional::MEig, SpectralFunctional::CEig}) {
    if (name == to_string(f)) return f;
  }
  throw std::invalid_argument("unknown functional '" + std::string(name) + "'");
}

bool uses_ld_sphere(SpectralFunctional f) noexcept {
  return f == SpectralFunctional::LdSingular || f == SpectralFunctional::HEig;
}

void SolverConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (shift && !(*shift >= 0.0 && std::isfinite(*shift))) {
    throw std::invalid_argument("shift must be a finite nonnegative number");
  }
}

Vector dual_norm_maximizer(std::span<const double> g, std::size_t d) {
  if (d < 2) throw std::invalid_argument("dual_norm_maximizer requires d >= 2");
  double scale = 0.0;
  for (double x : g) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) throw SolverError("dual_norm_maximizer: zero gradient");
  const double power = 1.0 / static_cast<double>(d - 1);
  Vector u(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::abs(g[i]) / scale;
    u[i] = std::copysign(d == 2 ? r : std::pow(r, power), g[i]);
  }
  const double norm = lp_norm(u, static_cast<double>(d));
  for (double& x : u) x /= norm;
  return u;
}

namespace {

using SF = SpectralFunctional;

bool symmetric_entries(const Tensor& t, double tol) {
  const Shape& shape = t.shape();
  for (std::size_t offset = 0; offset < t.size(); ++offset) {
    auto idx = multi_index(shape, offset);
    std::sort(idx.begin(), idx.end());
    if (std::abs(t.data()[offset] - t(idx)) > tol) return false;
  }
  return true;
}

bool partially_symmetric_entries(const Tensor& t, double tol) {
  const Shape& shape = t.shape();
  for (std::size_t offset = 0; offset < t.size(); ++offset) {
    const auto x = multi_index(shape, offset);
    const double a = t.data()[offset];
    if (std::abs(a - t.at({x[2], x[1], x[0], x[3]})) > tol) return false;
    if (std::abs(a - t.at({x[0], x[3], x[2], x[1]})) > tol) return false;
  }
  return true;
}

bool piezoelectric_entries(const Tensor& t, double tol) {
  const std::size_t n = t.shape().dim(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (std::abs(t.at({i, j, k}) - t.at({i, k, j})) > tol) return false;
  return true;
}

struct StartOutcome {
  double value = 0.0;
  VectorTuple point;
  long iterations = 0;
  bool converged = false;
  bool degenerate = false;
  std::vector<double> trace;
};

bool small_change(double now, double before, double tol) {
  return std::abs(now - before) <= tol * std::max(std::abs(now), std::abs(before));
}

void normalize2(Vector& v) {
  const double n = lp_norm(v, 2.0);
  for (double& x : v) x /= n;
}

void normalize_p(Vector& v, double p) {
  const double n = lp_norm(v, p);
  for (double& x : v) x /= n;
}

// Cyclic block ascent; each block update is the exact maximizer over that
// mode's sphere, so the objective never decreases.
StartOutcome block_ascent(const Tensor& t, VectorTuple u, bool ld, const SolverConfig& cfg) {
  const std::size_t d = t.order();
  StartOutcome out;
  double f = rank1_value(t, u);
  if (f < 0.0) {
    for (double& x : u[0]) x = -x;
    f = -f;
  }
  out.trace.push_back(f);
  for (int it = 0; it < cfg.max_iters; ++it) {
    double next = f;
    for (std::size_t j = 0; j < d; ++j) {
      Vector g = contract_except(t, u, j);
      const double gnorm = lp_norm(g, 2.0);
      if (gnorm == 0.0) {
        out.degenerate = true;
        return out;
      }
      if (ld) {
        u[j] = dual_norm_maximizer(g, d);
        if (j == d - 1) next = dot(g, u[j]);
      } else {
        for (double& x : g) x /= gnorm;
        u[j] = std::move(g);
        if (j == d - 1) next = gnorm;
      }
    }
    ++out.iterations;
    out.trace.push_back(next);
    const bool done = small_change(next, f, cfg.tol);
    f = next;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.value = rank1_value(t, u);
  out.point = std::move(u);
  return out;
}

// Shifted symmetric power iteration on the l^2 (ZEig) or l^d (HEig) sphere.
// A candidate that lowers the objective is rejected and the shift doubled;
// accepted steps with negligible gain halve an adaptive shift.
StartOutcome shifted_symmetric(const Tensor& t, Vector u, bool ld, double shift, bool adaptive,
                               const SolverConfig& cfg) {
  const std::size_t d = t.order();
  const double p = static_cast<double>(d);
  const auto gradient = [&](const Vector& x) { return contract_except(t, VectorTuple(d, x), 0); };
  StartOutcome out;

  Vector g = gradient(u);
  double f = dot(g, u);
  if (f < 0.0 && d % 2 == 1) {
    for (double& x : u) x = -x;
    f = -f;  // g is even in u for odd d
  }
  out.trace.push_back(f);
  const double shift_floor = std::max(t.max_abs(), std::numeric_limits<double>::min());
  double alpha = shift;

  for (int it = 0; it < cfg.max_iters; ++it) {
    ++out.iterations;
    Vector x = g;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double anchor = ld ? std::copysign(std::pow(std::abs(u[i]), p - 1.0), u[i]) : u[i];
      x[i] += alpha * anchor;
    }
    if (lp_norm(x, 2.0) == 0.0) {
      out.degenerate = true;
      return out;
    }
    Vector cand = ld ? dual_norm_maximizer(x, d) : x;
    if (!ld) normalize2(cand);
    Vector gc = gradient(cand);
    const double fc = dot(gc, cand);
    if (fc < f - 1e-12 * std::abs(f)) {
      alpha = alpha > 0.0 ? 2.0 * alpha : shift_floor;
      continue;
    }
    const bool done = small_change(fc, f, cfg.tol);
    const double gain = (fc - f) / std::max(std::abs(f), std::numeric_limits<double>::min());
    u = std::move(cand);
    g = std::move(gc);
    f = fc;
    out.trace.push_back(f);
    if (done) {
      out.converged = true;
      break;
    }
    if (adaptive && gain < 1e-6) alpha *= 0.5;
  }
  out.value = rank1_value(t, VectorTuple(d, u));
  out.point = VectorTuple(d, u);
  return out;
}

Matrix symmetrized(Matrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j) m(i, j) = m(j, i) = 0.5 * (m(i, j) + m(j, i));
  return m;
}

// Alternating exact maximization: v is the top eigenvector of B(u), u of C(v).
StartOutcome m_eigen_ascent(const Tensor& t, Vector u, Vector v, const SolverConfig& cfg) {
  const std::size_t m = t.shape().dim(0);
  const std::size_t n = t.shape().dim(1);
  const auto a = t.data();
  const auto at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return a[((i * n + j) * m + k) * n + l];
  };
  StartOutcome out;
  double f = rank1_value(t, {u, v, u, v});
  out.trace.push_back(f);
  for (int it = 0; it < cfg.max_iters; ++it) {
    Matrix b(n, n);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = 0; l < n; ++l) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
          for (std::size_t k = 0; k < m; ++k) s += u[i] * u[k] * at(i, j, k, l);
        b(j, l) = s;
      }
    v = top_eig_symmetric(symmetrized(b)).vector;
    Matrix c(m, m);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t k = 0; k < m; ++k) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
          for (std::size_t l = 0; l < n; ++l) s += v[j] * v[l] * at(i, j, k, l);
        c(i, k) = s;
      }
    auto top = top_eig_symmetric(symmetrized(c));
    u = std::move(top.vector);
    ++out.iterations;
    out.trace.push_back(top.value);
    const bool done = small_change(top.value, f, cfg.tol);
    f = top.value;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.point = {u, v, u, v};
  out.value = rank1_value(t, out.point);
  return out;
}

// u is the normalized contraction with (v, v); v the top eigenvector of M(u).
StartOutcome c_eigen_ascent(const Tensor& t, Vector u, Vector v, const SolverConfig& cfg) {
  const std::size_t n = t.shape().dim(0);
  const auto a = t.data();
  StartOutcome out;
  double f = rank1_value(t, {u, v, v});
  if (f < 0.0) {
    for (double& x : u) x = -x;
    f = -f;
  }
  out.trace.push_back(f);
  for (int it = 0; it < cfg.max_iters; ++it) {
    Vector w = contract_except(t, {u, v, v}, 0);
    if (lp_norm(w, 2.0) == 0.0) {
      out.degenerate = true;
      return out;
    }
    normalize2(w);
    u = std::move(w);
    Matrix mu(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) mu(j, k) += u[i] * a[(i * n + j) * n + k];
    auto top = top_eig_symmetric(symmetrized(mu));
    v = std::move(top.vector);
    ++out.iterations;
    out.trace.push_back(top.value);
    const bool done = small_change(top.value, f, cfg.tol);
    f = top.value;
    if (done) {
      out.converged = true;
      break;
    }
  }
  out.point = {u, v, v};
  out.value = rank1_value(t, out.point);
  return out;
}

Vector basis(std::size_t n, std::size_t i) {
  Vector e(n, 0.0);
  e[i] = 1.0;
  return e;
}

// Offsets of the `count` entries with the largest |value| among `candidates`,
// ties broken by position.
std::vector<std::size_t> largest_entries(const Tensor& t, std::vector<std::size_t> candidates, std::size_t count) {
  const auto a = t.data();
  count = std::min(count, candidates.size());
  std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(count), candidates.end(),
                    [&](std::size_t x, std::size_t y) {
                      const double ax = std::abs(a[x]);
                      const double ay = std::abs(a[y]);
                      return ax != ay ? ax > ay : x < y;
                    });
  candidates.resize(count);
  return candidates;
}

SolveResult solve_matrix(const Tensor& t, SF f) {
  const std::size_t rows = t.shape().dim(0);
  const std::size_t cols = t.shape().dim(1);
  SolveResult result;
  result.functional = f;
  result.converged = true;
  result.starts = 1;
  if (f == SF::ZEig || f == SF::HEig) {
    Matrix a(rows, rows);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < rows; ++j) a(i, j) = t.at({i, j});
    auto top = top_eig_symmetric(a);
    result.argmax = {top.vector, top.vector};
  } else {
    // Top singular pair through the smaller Gram matrix.
    std::vector<double> transposed(t.size());
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) transposed[j * rows + i] = t.at({i, j});
    const Tensor tt(Shape{cols, rows}, std::move(transposed));
    const bool wide = cols > rows;
    const Tensor& tall = wide ? tt : t;
    auto right = top_eig_symmetric(gram(tall)).vector;
    Vector left = contract_except(tall, {Vector{}, right}, 0);
    if (lp_norm(left, 2.0) == 0.0) {
      left = basis(left.size(), 0);
    } else {
      normalize2(left);
    }
    result.argmax = wide ? VectorTuple{right, left} : VectorTuple{left, right};
  }
  result.value = rank1_value(t, result.argmax);
  return result;
}

}  // namespace

void check_compatible(const Tensor& t, SpectralFunctional f) {
  const Shape& shape = t.shape();
  const double tol = 1e-12 * t.max_abs();
  switch (f) {
    case SF::L2Singular:
    case SF::LdSingular:
      return;
    case SF::ZEig:
    case SF::HEig:
      if (!shape.all_dims_equal()) throw SolverError(to_string(f) + " requires shape n^d");
      if (!symmetric_entries(t, tol)) throw SolverError(to_string(f) + " requires a symmetric tensor");
      return;
    case SF::MEig:
      if (shape.order() != 4 || shape.dim(0) != shape.dim(2) || shape.dim(1) != shape.dim(3)) {
        throw SolverError("meig requires shape (m,n,m,n)");
      }
      if (!partially_symmetric_entries(t, tol)) throw SolverError("meig requires a partially symmetric tensor");
      return;
    case SF::CEig:
      if (shape.order() != 3 || !shape.all_dims_equal()) throw SolverError("ceig requires shape (n,n,n)");
      if (!piezoelectric_entries(t, tol)) {
        throw SolverError("ceig requires symmetry in the last two modes");
      }
      return;
  }
}

SolveResult solve(const Tensor& t, SpectralFunctional f, const SolverConfig& cfg) {
  cfg.validate();
  check_compatible(t, f);
  if (t.order() == 2 && (f == SF::L2Singular || f == SF::LdSingular || f == SF::ZEig || f == SF::HEig)) {
    return solve_matrix(t, f);
  }

  const Shape& shape = t.shape();
  const std::size_t d = t.order();
  const double p = static_cast<double>(d);
  const bool ld = uses_ld_sphere(f);
  const std::uint64_t stream = cfg.rng.substream_seed();

  // Start points: optional warm start, then coordinate starts, then random.
  std::vector<VectorTuple> coordinate;
  const std::size_t coordinate_budget = std::max<std::size_t>(1, static_cast<std::size_t>(cfg.restarts) / 4);
  switch (f) {
    case SF::L2Singular:
    case SF::LdSingular: {
      std::vector<std::size_t> all(t.size());
      std::iota(all.begin(), all.end(), 0);
      for (std::size_t offset : largest_entries(t, std::move(all), coordinate_budget)) {
        const auto idx = multi_index(shape, offset);
        VectorTuple u;
        for (std::size_t j = 0; j < d; ++j) u.push_back(basis(shape.dim(j), idx[j]));
        coordinate.push_back(std::move(u));
      }
      break;
    }
    case SF::ZEig:
    case SF::HEig: {
      const std::size_t n = shape.dim(0);
      std::vector<std::size_t> diagonal;
      for (std::size_t i = 0; i < n; ++i) diagonal.push_back(flat_index(shape, std::vector<std::size_t>(d, i)));
      for (std::size_t offset : largest_entries(t, std::move(diagonal), coordinate_budget)) {
        coordinate.push_back({basis(n, multi_index(shape, offset)[0])});
      }
      break;
    }
    case SF::MEig: {
      std::vector<std::size_t> pairs;
      for (std::size_t i = 0; i < shape.dim(0); ++i)
        for (std::size_t j = 0; j < shape.dim(1); ++j) pairs.push_back(flat_index(shape, {i, j, i, j}));
      for (std::size_t offset : largest_entries(t, std::move(pairs), coordinate_budget)) {
        const auto idx = multi_index(shape, offset);
        coordinate.push_back({basis(shape.dim(0), idx[0]), basis(shape.dim(1), idx[1])});
      }
      break;
    }
    case SF::CEig: {
      const std::size_t n = shape.dim(0);
      std::vector<std::size_t> pairs;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) pairs.push_back(flat_index(shape, {i, j, j}));
      for (std::size_t offset : largest_entries(t, std::move(pairs), coordinate_budget)) {
        const auto idx = multi_index(shape, offset);
        coordinate.push_back({basis(n, idx[0]), basis(n, idx[1])});
      }
      break;
    }
  }

  const auto random_start = [&](std::uint64_t index) {
    NormalSource src(derive_substream(stream, index));
    VectorTuple u;
    switch (f) {
      case SF::L2Singular:
      case SF::LdSingular:
        for (std::size_t j = 0; j < d; ++j) u.push_back(src.unit_vector(shape.dim(j)));
        break;
      case SF::ZEig:
      case SF::HEig: u.push_back(src.unit_vector(shape.dim(0))); break;
      case SF::MEig:
        u.push_back(src.unit_vector(shape.dim(0)));
        u.push_back(src.unit_vector(shape.dim(1)));
        break;
      case SF::CEig:
        u.push_back(src.unit_vector(shape.dim(0)));
        u.push_back(src.unit_vector(shape.dim(0)));
        break;
    }
    return u;
  };

  const bool adaptive_shift = !cfg.shift.has_value();
  const double shift = cfg.shift.value_or((p + 1.0) * t.max_abs());
  const auto run = [&](VectorTuple start) -> StartOutcome {
    if (ld) {
      for (auto& v : start) normalize_p(v, p);
    }
    switch (f) {
      case SF::L2Singular: return block_ascent(t, std::move(start), false, cfg);
      case SF::LdSingular: return block_ascent(t, std::move(start), true, cfg);
      case SF::ZEig: return shifted_symmetric(t, std::move(start[0]), false, shift, adaptive_shift, cfg);
      case SF::HEig: return shifted_symmetric(t, std::move(start[0]), true, shift, adaptive_shift, cfg);
      case SF::MEig: return m_eigen_ascent(t, std::move(start[0]), std::move(start[1]), cfg);
      case SF::CEig: return c_eigen_ascent(t, std::move(start[0]), std::move(start[1]), cfg);
    }
    return {};
  };

  std::vector<VectorTuple> starts;
  if (f == SF::LdSingular) {
    SolverConfig inner = cfg;
    inner.record_traces = false;
    starts.push_back(solve(t, SF::L2Singular, inner).argmax);
  }
  for (auto& c : coordinate) {
    if (starts.size() >= static_cast<std::size_t>(cfg.restarts) + (f == SF::LdSingular ? 1 : 0)) break;
    starts.push_back(std::move(c));
  }

  SolveResult result;
  result.functional = f;
  bool have_best = false;
  std::uint64_t next_stream = 0;
  std::uint64_t retry_stream = static_cast<std::uint64_t>(cfg.restarts);
  const std::size_t total = static_cast<std::size_t>(cfg.restarts) + (f == SF::LdSingular ? 1 : 0);
  constexpr int kMaxRetries = 3;

  for (std::size_t s = 0; s < total; ++s) {
    VectorTuple start = s < starts.size() ? std::move(starts[s]) : random_start(next_stream++);
    StartOutcome outcome = run(std::move(start));
    for (int retry = 0; outcome.degenerate && retry < kMaxRetries; ++retry) {
      ++result.degenerate_restarts;
      result.iterations_total += outcome.iterations;
      outcome = run(random_start(retry_stream++));
    }
    ++result.starts;
    result.iterations_total += outcome.iterations;
    if (outcome.degenerate) {
      ++result.degenerate_restarts;
      continue;
    }
    if (cfg.record_traces) result.traces.push_back(outcome.trace);
    if (!have_best || outcome.value > result.value + 1e-12 * std::abs(result.value)) {
      have_best = true;
      result.value = outcome.value;
      result.argmax = std::move(outcome.point);
      result.converged = outcome.converged;
    }
  }
  if (!have_best) {
    throw SolverError("all " + std::to_string(total) + " starts degenerated for " + to_string(f));
  }
  return result;
}

}  // namespace rtensor
