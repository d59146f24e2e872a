#include "landau/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "landau/errors.hpp"
#include "landau/log.hpp"

namespace landau {
namespace {

// Fornberg's recursion: weights of the derivatives (0..max_order) at x0 of the
// Lagrange interpolant through xs.
std::vector<std::vector<double>> fornberg(double x0, std::span<const double> xs, int max_order) {
  const std::size_t n = xs.size();
  std::vector<std::vector<double>> c(static_cast<std::size_t>(max_order) + 1,
                                     std::vector<double>(n, 0.0));
  double c1 = 1.0;
  double c4 = xs[0] - x0;
  c[0][0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const int mn = std::min<int>(static_cast<int>(i), max_order);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = xs[i] - x0;
    for (std::size_t j = 0; j < i; ++j) {
      const double c3 = xs[i] - xs[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int k = mn; k >= 1; --k) {
          c[k][i] = c1 * (k * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
        }
        c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
      }
      for (int k = mn; k >= 1; --k) {
        c[k][j] = (c4 * c[k][j] - k * c[k - 1][j]) / c3;
      }
      c[0][j] = c4 * c[0][j] / c3;
    }
    c1 = c2;
  }
  return c;
}

// Stencil over signed node indices; a negative index -k is the mirror image
// -r_k and its weight is folded onto node k (even reflection).
RadialGrid::Stencil make_stencil(std::span<const double> nodes, const std::vector<long>& idx,
                                 double x0, int order) {
  std::vector<double> xs(idx.size());
  long first = idx.front() < 0 ? 0 : idx.front();
  long last = 0;
  for (std::size_t m = 0; m < idx.size(); ++m) {
    const long k = idx[m];
    xs[m] = k < 0 ? -nodes[static_cast<std::size_t>(-k)] : nodes[static_cast<std::size_t>(k)];
    first = std::min(first, std::abs(k));
    last = std::max(last, std::abs(k));
  }
  const auto c = fornberg(x0, xs, order);
  std::vector<double> w(static_cast<std::size_t>(last - first + 1), 0.0);
  for (std::size_t m = 0; m < idx.size(); ++m) {
    w[static_cast<std::size_t>(std::abs(idx[m]) - first)] += c[static_cast<std::size_t>(order)][m];
  }
  // Skipped nodes carry zero weight; keep them so the stencil stays contiguous.
  RadialGrid::Stencil s;
  s.first = static_cast<std::size_t>(first);
  s.w = std::move(w);
  return s;
}

// Derivative stencils span 2 * kHalf + 1 nodes.
constexpr long kHalf = 3;

double ipow(double r, int k) {
  double out = 1.0;
  for (int i = 0; i < k; ++i) out *= r;
  return out;
}

}  // namespace

std::string_view to_string(GridScheme scheme) {
  return scheme == GridScheme::uniform ? "uniform" : "graded";
}

GridScheme parse_grid_scheme(std::string_view text) {
  if (text == "uniform") return GridScheme::uniform;
  if (text == "graded") return GridScheme::graded;
  throw ConfigurationError("unknown grid scheme '" + std::string(text) + "'");
}

RadialGrid::RadialGrid(double r_max, std::size_t intervals, GridScheme scheme) : scheme_(scheme) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) {
    throw ConfigurationError("grid radius must be positive, got " + std::to_string(r_max));
  }
  if (intervals < kMinIntervals) {
    throw ConfigurationError("grid needs at least " + std::to_string(kMinIntervals) +
                             " intervals, got " + std::to_string(intervals));
  }
  const std::size_t n = intervals;
  nodes_.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double xi = static_cast<double>(i) / static_cast<double>(n);
    nodes_[i] = scheme == GridScheme::uniform ? r_max * xi : r_max * xi * xi;
  }
  nodes_[0] = 0.0;
  nodes_[n] = r_max;

  // Cell rules: cubic through four neighbours, integrated by 2-point Gauss
  // (exact for the cubic interpolant).
  static const double g = 1.0 / std::sqrt(3.0);
  rules_.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const std::size_t first = std::min(j == 0 ? 0 : j - 1, n - 3);
    const double a = nodes_[j];
    const double b = nodes_[j + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    CellRule rule{first, {0.0, 0.0, 0.0, 0.0}};
    for (double t : {-g, g}) {
      const double x = mid + half * t;
      for (std::size_t m = 0; m < 4; ++m) {
        double l = 1.0;
        for (std::size_t q = 0; q < 4; ++q) {
          if (q == m) continue;
          l *= (x - nodes_[first + q]) / (nodes_[first + m] - nodes_[first + q]);
        }
        rule.w[m] += half * l;
      }
    }
    rules_[j] = rule;
  }

  // Seven-point derivative stencils (sixth order). Where the graded map packs
  // nodes closer than kMinStencilSpacing the window skips nodes, which trades
  // an O(h^6) truncation error for the eps/h^2 roundoff of a tight stencil.
  // Even fields see mirrored nodes across the origin; other fields get a
  // one-sided window there. Windows shift inward at R_max.
  const long last = static_cast<long>(n);
  auto nearest = [&](double x) {
    const std::size_t j = locate(x);
    if (j >= n) return last;
    return static_cast<long>(x - nodes_[j] < nodes_[j + 1] - x ? j : j + 1);
  };
  for (int parity = 0; parity < 2; ++parity) {
    auto& d1 = parity == 0 ? d1_even_ : d1_none_;
    auto& d2 = parity == 0 ? d2_even_ : d2_none_;
    d1.resize(n + 1);
    d2.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
      const long c = static_cast<long>(i);
      const double h = nodes_[std::min(i + 1, n)] - nodes_[i == n ? n - 1 : i];
      std::vector<long> idx;
      if (h >= kMinStencilSpacing || i + kHalf + 1 > n) {
        long lo = std::min(c - kHalf, last - 2 * kHalf);
        if (parity == 1) lo = std::max(0L, lo);
        for (long m = 0; m <= 2 * kHalf; ++m) idx.push_back(lo + m);
      } else {
        for (long m = -kHalf; m <= kHalf; ++m) {
          const double x = nodes_[i] + static_cast<double>(m) * kMinStencilSpacing;
          long k = x < 0.0 ? -nearest(-x) : nearest(x);
          if (m == 0) k = c;
          if (!idx.empty() && k <= idx.back()) k = idx.back() + 1;
          idx.push_back(k);
        }
        if (parity == 1 && idx.front() < 0) {
          const long shift = -idx.front();
          for (auto& k : idx) k += shift;
        }
      }
      d1[i] = make_stencil(nodes_, idx, nodes_[i], 1);
      auto idx2 = idx;
      if (i + 2 > n) idx2.insert(idx2.begin(), idx.front() - 1);
      if (parity == 1 && idx.front() == 0 && i < 2) idx2.push_back(idx.back() + 1);
      d2[i] = make_stencil(nodes_, idx2, nodes_[i], 2);
    }
  }
  d1_even_[0] = Stencil{0, {0.0}};
}

const RadialGrid::Stencil& RadialGrid::stencil(int order, std::size_t i, bool even) const {
  if (even) return order == 1 ? d1_even_[i] : d2_even_[i];
  return order == 1 ? d1_none_[i] : d2_none_[i];
}

std::size_t RadialGrid::locate(double r) const {
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), r);
  if (it == nodes_.begin()) return 0;
  return static_cast<std::size_t>(std::distance(nodes_.begin(), it) - 1);
}

GridPtr build_grid(double r_max, std::size_t intervals, GridScheme scheme) {
  return std::make_shared<const RadialGrid>(r_max, intervals, scheme);
}

// ---------------------------------------------------------------------------

RadialField::RadialField(GridPtr grid, std::vector<double> values, Parity parity)
    : grid_(std::move(grid)), values_(std::move(values)), parity_(parity) {
  if (!grid_) throw ConfigurationError("field constructed without a grid");
  if (values_.size() != grid_->size()) {
    throw ConfigurationError("field has " + std::to_string(values_.size()) +
                             " values for a grid of " + std::to_string(grid_->size()) + " nodes");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      std::ostringstream os;
      os << "non-finite value " << values_[i] << " at node " << i << " (r = " << (*grid_)[i]
         << ")";
      throw DataError(os.str());
    }
  }
}

RadialField RadialField::zeros(GridPtr grid) {
  const std::size_t n = grid->size();
  return RadialField(std::move(grid), std::vector<double>(n, 0.0));
}

RadialField RadialField::sample(GridPtr grid, const std::function<double(double)>& fn,
                                Parity parity) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn((*grid)[i]);
  return RadialField(std::move(grid), std::move(v), parity);
}

void require_same_grid(const RadialField& a, const RadialField& b) {
  if (a.grid_ptr() != b.grid_ptr() && a.grid().nodes().data() != b.grid().nodes().data()) {
    if (a.size() != b.size() ||
        !std::equal(a.grid().nodes().begin(), a.grid().nodes().end(), b.grid().nodes().begin())) {
      throw ConfigurationError("fields live on different grids");
    }
  }
}

namespace {
template <class Op>
RadialField combine(const RadialField& a, const RadialField& b, Op op) {
  require_same_grid(a, b);
  std::vector<double> v(a.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(a[i], b[i]);
  const Parity p = (a.parity() == Parity::even && b.parity() == Parity::even) ? Parity::even
                                                                              : Parity::none;
  return RadialField(a.grid_ptr(), std::move(v), p);
}
}  // namespace

RadialField RadialField::operator+(const RadialField& o) const {
  return combine(*this, o, [](double x, double y) { return x + y; });
}
RadialField RadialField::operator-(const RadialField& o) const {
  return combine(*this, o, [](double x, double y) { return x - y; });
}
RadialField RadialField::operator*(const RadialField& o) const {
  return combine(*this, o, [](double x, double y) { return x * y; });
}
RadialField RadialField::operator*(double s) const {
  std::vector<double> v(values_);
  for (double& x : v) x *= s;
  return RadialField(grid_, std::move(v), parity_);
}

double RadialField::max_abs() const {
  double m = 0.0;
  for (double x : values_) m = std::max(m, std::abs(x));
  return m;
}

// ---------------------------------------------------------------------------

double integrate_values(const RadialGrid& grid, std::span<const double> f, int k) {
  const auto r = grid.nodes();
  double total = 0.0;
  for (const auto& rule : grid.cell_rules()) {
    double cell = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      const std::size_t i = rule.first + m;
      cell += rule.w[m] * f[i] * ipow(r[i], k);
    }
    total += cell;
  }
  return total;
}

std::vector<double> quadrature_weights(const RadialGrid& grid) {
  std::vector<double> w(grid.size(), 0.0);
  for (const auto& rule : grid.cell_rules()) {
    for (std::size_t m = 0; m < 4; ++m) w[rule.first + m] += rule.w[m];
  }
  return w;
}

double integrate(const RadialField& f, int k) {
  if (k < 0 || k > 16) throw ConfigurationError("moment order must lie in [0, 16]");
  const double result = integrate_values(f.grid(), f.values(), k);
  const double rmax = f.grid().r_max();
  const double tail = std::abs(f.values().back()) * std::pow(rmax, k + 1);
  if (tail > 0.0 && tail >= 1e-3 * std::abs(result)) {
    std::ostringstream os;
    os << "integrate: truncated tail |f(R_max)| R_max^" << (k + 1) << " = " << tail
       << " is not small against the result " << result;
    log::warn(os.str());
  }
  return result;
}

std::vector<double> cumulative_integral(const RadialGrid& grid, std::span<const double> f, int k) {
  const auto r = grid.nodes();
  std::vector<double> out(grid.size(), 0.0);
  const auto rules = grid.cell_rules();
  for (std::size_t j = 0; j < rules.size(); ++j) {
    double cell = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      const std::size_t i = rules[j].first + m;
      cell += rules[j].w[m] * f[i] * ipow(r[i], k);
    }
    out[j + 1] = out[j] + cell;
  }
  return out;
}

namespace {
void apply_stencils(const RadialGrid& grid, std::span<const double> f, bool even, int order,
                    std::span<double> out) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const auto& s = grid.stencil(order, i, even);
    double acc = 0.0;
    for (std::size_t m = 0; m < s.w.size(); ++m) acc += s.w[m] * f[s.first + m];
    out[i] = acc;
  }
}
}  // namespace

void first_derivative(const RadialGrid& grid, std::span<const double> f, Parity parity,
                      std::span<double> out) {
  apply_stencils(grid, f, parity == Parity::even, 1, out);
}

void second_derivative(const RadialGrid& grid, std::span<const double> f, Parity parity,
                       std::span<double> out) {
  apply_stencils(grid, f, parity == Parity::even, 2, out);
}

RadialField differentiate(const RadialField& f, int order) {
  if (order != 1 && order != 2) throw ConfigurationError("derivative order must be 1 or 2");
  std::vector<double> out(f.size());
  if (order == 1) {
    first_derivative(f.grid(), f.values(), f.parity(), out);
  } else {
    second_derivative(f.grid(), f.values(), f.parity(), out);
  }
  // d/dr of an even function is odd; d2/dr2 is even again.
  const Parity p = (order == 2 && f.parity() == Parity::even) ? Parity::even : Parity::none;
  return RadialField(f.grid_ptr(), std::move(out), p);
}

MomentTable moments(const RadialField& f) {
  const auto& grid = f.grid();
  auto a2 = cumulative_integral(grid, f.values(), 2);
  auto a4 = cumulative_integral(grid, f.values(), 4);

  // B1 accumulated from the outer edge inward so small tails keep their digits.
  const auto r = grid.nodes();
  const auto rules = grid.cell_rules();
  std::vector<double> b1(grid.size(), 0.0);
  for (std::size_t j = rules.size(); j-- > 0;) {
    double cell = 0.0;
    for (std::size_t m = 0; m < 4; ++m) {
      const std::size_t i = rules[j].first + m;
      cell += rules[j].w[m] * f[i] * r[i];
    }
    b1[j] = b1[j + 1] + cell;
  }
  return MomentTable{RadialField(f.grid_ptr(), std::move(a2), Parity::none),
                     RadialField(f.grid_ptr(), std::move(a4), Parity::none),
                     RadialField(f.grid_ptr(), std::move(b1), Parity::none), TailModel::truncation};
}

}  // namespace landau
