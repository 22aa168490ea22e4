#pragma once

#include "superem/image.hpp"

#include <Eigen/Core>

#include <string>
#include <vector>

namespace superem {

/// Symmetric odd-length biorthogonal filter pair and decomposition depth.
///
/// Filters are stored centered: tap k of a length-(2r+1) filter sits at index k + r.
/// The high-pass filters follow from the low-pass pair by modulation,
/// g_analysis[k] = (-1)^k h_synthesis[k] and g_synthesis[k] = (-1)^k h_analysis[k].
class WaveletSpec
{
public:
	/// Throws std::invalid_argument if the filters are not symmetric and odd-length,
	/// or if a one-level analysis/synthesis of unit impulses does not reproduce them
	/// within 1e-10.
	WaveletSpec(std::string family, int levels, std::vector<double> analysis_low, std::vector<double> synthesis_low);

	/// Biorthogonal 6.8 (the 17/11-tap CDF pair) with `levels` decomposition levels.
	static WaveletSpec bior68(int levels = 3);

	const std::string& family() const { return family_; }
	int levels() const { return levels_; }
	const std::vector<double>& analysis_low() const { return ha_; }
	const std::vector<double>& analysis_high() const { return ga_; }
	const std::vector<double>& synthesis_low() const { return hs_; }
	const std::vector<double>& synthesis_high() const { return gs_; }

	WaveletSpec with_levels(int levels) const;

private:
	std::string family_;
	int levels_;
	std::vector<double> ha_, ga_, hs_, gs_;
};

/// Mallat-layout coefficient array: after L levels the top-left (H/2^L x W/2^L) block
/// is the approximation; level l (1 = finest) details occupy the three quadrants of
/// the (H/2^(l-1) x W/2^(l-1)) block around its top-left sub-block.
struct CoefficientPyramid
{
	using Grid = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

	int levels = 0;
	Grid coeffs;

	Index size() const { return coeffs.size(); }
	int width() const { return int(coeffs.cols()); }
	int height() const { return int(coeffs.rows()); }

	auto approximation() { return coeffs.topLeftCorner(height() >> levels, width() >> levels); }
	auto approximation() const { return coeffs.topLeftCorner(height() >> levels, width() >> levels); }
};

/// One-dimensional analysis of an even-length signal with whole-sample symmetric
/// extension: first n/2 outputs are low-pass, last n/2 high-pass.
Eigen::VectorXd analyze_1d(const Eigen::Ref<const Eigen::VectorXd>& x, const WaveletSpec& spec);
Eigen::VectorXd synthesize_1d(const Eigen::Ref<const Eigen::VectorXd>& c, const WaveletSpec& spec);

/// Separable 2-D forward transform. Width and height must be divisible by 2^levels.
CoefficientPyramid dwt2(const ImageGrid& x, const WaveletSpec& spec);

/// Inverse of dwt2; `extent` is attached to the returned image.
ImageGrid idwt2(const CoefficientPyramid& c, const WaveletSpec& spec, double extent = 1.0);

/// Sum of |coefficient| over every band, approximation included.
inline double l1_norm(const CoefficientPyramid& c) { return c.coeffs.cwiseAbs().sum(); }

/// Convenience: l1_norm(dwt2(x)).
double wavelet_l1(const ImageGrid& x, const WaveletSpec& spec);

}  // namespace superem
