#pragma once

// Orthonormal 1D/2D discrete wavelet transforms with periodic extension.
//
// Analysis follows
//     approx[n] = sum_k h[k] * x[(2n - k) mod N]
//     detail[n] = sum_k g[k] * x[(2n - k) mod N]
// and synthesis is its transpose, which for an orthonormal filter pair is
// also its exact inverse.

#include "lwave/matrix.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace lwave::wavelet {

enum class Family { haar, db2 };

std::string_view to_string(Family f) noexcept;
Family parse_family(std::string_view name); // throws InvalidConfig

/// Low-pass (scaling) and high-pass (wavelet) analysis filters.
///
/// Construction validates the orthonormal-QMF invariants: sum(h) = sqrt(2),
/// sum(g) = 0, sum(h^2) = 1 and g[k] = (-1)^k h[L-1-k].
class FilterPair {
public:
    FilterPair(std::vector<double> low, std::vector<double> high);

    std::span<const double> low() const noexcept { return h_; }
    std::span<const double> high() const noexcept { return g_; }
    std::size_t length() const noexcept { return h_.size(); }

private:
    std::vector<double> h_;
    std::vector<double> g_;
};

FilterPair haar_filters();
FilterPair db2_filters();
FilterPair filters_for(Family f);

struct Coeffs1D {
    std::vector<double> approx;
    std::vector<double> detail;
};

Coeffs1D dwt1d(std::span<const double> signal, const FilterPair& filters);
std::vector<double> idwt1d(std::span<const double> approx, std::span<const double> detail,
                           const FilterPair& filters);

/// The four planes of one separable 2D level, each (H/2, W/2).
///
/// Orientation: the first letter names the filter applied along rows
/// (horizontal direction), the second the filter applied along columns.
/// HL therefore carries horizontal high frequencies (vertical edges) and LH
/// carries vertical high frequencies (horizontal edges).
struct SubbandSet {
    Matrix ll;
    Matrix lh;
    Matrix hl;
    Matrix hh;
};

SubbandSet dwt2d(const Matrix& image, const FilterPair& filters);
Matrix idwt2d(const SubbandSet& bands, const FilterPair& filters);

struct DetailTriple {
    Matrix lh;
    Matrix hl;
    Matrix hh;
};

struct MultiLevelDecomposition {
    std::vector<DetailTriple> levels; // finest first
    Matrix final_ll;

    std::size_t depth() const noexcept { return levels.size(); }
};

MultiLevelDecomposition wavedec2(const Matrix& image, const FilterPair& filters, int depth);
Matrix waverec2(const MultiLevelDecomposition& dec, const FilterPair& filters);

} // namespace lwave::wavelet
