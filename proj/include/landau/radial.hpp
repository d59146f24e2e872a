#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace landau {

enum class GridScheme { uniform, graded };

std::string_view to_string(GridScheme scheme);
GridScheme parse_grid_scheme(std::string_view text);

/// Nodes 0 = r_0 < r_1 < ... < r_N = R_max on the radial half-line r = |v|.
///
/// The graded scheme uses the algebraic map r = R_max * xi^2 with xi uniform,
/// which clusters nodes near the origin where the Maxwellian has curvature.
/// Each cell [r_j, r_{j+1}] carries a four-point interpolatory rule, so the
/// composite quadrature is exact for cubics on any node distribution.
class RadialGrid {
 public:
  struct CellRule {
    std::size_t first;          // index of the first stencil node
    std::array<double, 4> w;    // weights for nodes first .. first+3
  };

  RadialGrid(double r_max, std::size_t intervals, GridScheme scheme);

  std::size_t intervals() const { return nodes_.size() - 1; }
  std::size_t size() const { return nodes_.size(); }
  double r_max() const { return nodes_.back(); }
  GridScheme scheme() const { return scheme_; }
  std::span<const double> nodes() const { return nodes_; }
  double operator[](std::size_t i) const { return nodes_[i]; }
  std::span<const CellRule> cell_rules() const { return rules_; }

  /// Finite-difference stencil: out_i = sum_m w[m] * f[first + m].
  struct Stencil {
    std::size_t first = 0;
    std::vector<double> w;
  };

  /// order 1 or 2; nodes 0 and 1 depend on parity, all other nodes do not.
  const Stencil& stencil(int order, std::size_t i, bool even) const;

  /// Index of the last node with r_i <= r.
  std::size_t locate(double r) const;

 private:
  std::vector<double> nodes_;
  std::vector<CellRule> rules_;
  std::vector<Stencil> d1_even_, d2_even_, d1_none_, d2_none_;
  GridScheme scheme_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline constexpr std::size_t kMinIntervals = 64;

/// Smallest node spacing used inside a derivative stencil.
inline constexpr double kMinStencilSpacing = 2e-3;

/// Throws ConfigurationError for R_max <= 0 or N < 64.
GridPtr build_grid(double r_max, std::size_t intervals, GridScheme scheme);

enum class Parity { even, none };

/// A radially symmetric function sampled at the grid nodes. Values are
/// finite (checked on construction) and immutable.
class RadialField {
 public:
  RadialField(GridPtr grid, std::vector<double> values, Parity parity = Parity::even);

  static RadialField zeros(GridPtr grid);
  static RadialField sample(GridPtr grid, const std::function<double(double)>& fn,
                            Parity parity = Parity::even);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  Parity parity() const { return parity_; }

  RadialField operator+(const RadialField& other) const;
  RadialField operator-(const RadialField& other) const;
  RadialField operator*(const RadialField& other) const;
  RadialField operator*(double s) const;
  friend RadialField operator*(double s, const RadialField& f) { return f * s; }

  double max_abs() const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  Parity parity_;
};

void require_same_grid(const RadialField& a, const RadialField& b);

/// Composite quadrature of int_0^{R_max} f r^k dr, k in [0, 16].
double integrate(const RadialField& f, int k);

/// Raw-span variant used inside kernels; no finiteness or tail checks.
double integrate_values(const RadialGrid& grid, std::span<const double> f, int k);

/// Nodal weights w_i with sum_i w_i f_i equal to the composite rule for int f dr.
std::vector<double> quadrature_weights(const RadialGrid& grid);

/// Cumulative integrals int_0^{r_i} f r^k dr at every node.
std::vector<double> cumulative_integral(const RadialGrid& grid, std::span<const double> f, int k);

/// Seven-point sixth-order differences, shifted one-sided near R_max; even
/// fields use mirrored nodes near r = 0 (first derivative exactly 0 there).
RadialField differentiate(const RadialField& f, int order);

/// Span versions writing into caller storage, used by operator kernels.
void first_derivative(const RadialGrid& grid, std::span<const double> f, Parity parity,
                      std::span<double> out);
void second_derivative(const RadialGrid& grid, std::span<const double> f, Parity parity,
                       std::span<double> out);

enum class TailModel { truncation };

struct MomentTable {
  RadialField a2;  // int_0^r f s^2 ds
  RadialField a4;  // int_0^r f s^4 ds
  RadialField b1;  // int_r^{R_max} f s ds
  TailModel tail = TailModel::truncation;
};

MomentTable moments(const RadialField& f);

}  // namespace landau
