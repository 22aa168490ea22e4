#include "superem/wavelet.hpp"

#include <cmath>
#include <stdexcept>

namespace superem {

namespace {

// bior6.8 low-pass taps, centered (PyWavelets / MATLAB convention, sum = sqrt 2).
const std::vector<double> kBior68AnalysisLow = {
	0.0019088317364812906, -0.0019142861290887667, -0.016990639867602342, 0.01193456527972926,
	0.04973290349094079,   -0.077263173167204144,  -0.09405920349573646,  0.42079628460982682,
	0.82592299745840225,   0.42079628460982682,    -0.09405920349573646,  -0.077263173167204144,
	0.04973290349094079,   0.01193456527972926,    -0.016990639867602342, -0.0019142861290887667,
	0.0019088317364812906};
const std::vector<double> kBior68SynthesisLow = {
	0.014426282505624435, 0.014467504896790148, -0.078722001062628819, -0.040367979030339923,
	0.41784910915027457,  0.75890772945365415,  0.41784910915027457,   -0.040367979030339923,
	-0.078722001062628819, 0.014467504896790148, 0.014426282505624435};

std::vector<double> modulate(const std::vector<double>& h)
{
	const int r = int(h.size()) / 2;
	std::vector<double> g(h.size());
	for (int k = -r; k <= r; ++k)
		g[std::size_t(k + r)] = ((k % 2) == 0 ? 1.0 : -1.0) * h[std::size_t(k + r)];
	return g;
}

// Whole-sample symmetric reflection into [0, n-1]; period 2n-2.
inline Index reflect(Index m, Index n)
{
	if (n == 1)
		return 0;
	const Index period = 2 * n - 2;
	m %= period;
	if (m < 0)
		m += period;
	return m >= n ? period - m : m;
}

void require_even(Index n)
{
	if (n < 2 || n % 2 != 0)
		throw std::invalid_argument("wavelet: signal length must be even and >= 2, got " + std::to_string(n));
}

}  // namespace

WaveletSpec::WaveletSpec(std::string family, int levels, std::vector<double> analysis_low,
                         std::vector<double> synthesis_low)
	: family_(std::move(family)), levels_(levels), ha_(std::move(analysis_low)), hs_(std::move(synthesis_low))
{
	if (levels_ < 1)
		throw std::invalid_argument("wavelet: need at least one level");
	for (const auto* f : {&ha_, &hs_})
	{
		if (f->size() % 2 == 0)
			throw std::invalid_argument("wavelet: filters must have odd length");
		for (std::size_t k = 0; k < f->size(); ++k)
			if (std::abs((*f)[k] - (*f)[f->size() - 1 - k]) > 1e-15)
				throw std::invalid_argument("wavelet: filters must be symmetric");
	}
	ga_ = modulate(hs_);
	gs_ = modulate(ha_);

	// Perfect reconstruction on impulses at every phase of a signal long enough
	// that extension never folds a filter onto itself.
	const Index n = 2 * Index(std::max(ha_.size(), hs_.size())) + 4;
	for (Index pos = 0; pos < n; ++pos)
	{
		Eigen::VectorXd delta = Eigen::VectorXd::Zero(n);
		delta[pos] = 1.0;
		const double err = (synthesize_1d(analyze_1d(delta, *this), *this) - delta).cwiseAbs().maxCoeff();
		if (!(err < 1e-10))
			throw std::invalid_argument("wavelet: filters '" + family_ + "' fail perfect reconstruction (error " +
			                            std::to_string(err) + ")");
	}
}

WaveletSpec WaveletSpec::bior68(int levels)
{
	return WaveletSpec("bior6.8", levels, kBior68AnalysisLow, kBior68SynthesisLow);
}

WaveletSpec WaveletSpec::with_levels(int levels) const
{
	return WaveletSpec(family_, levels, ha_, hs_);
}

Eigen::VectorXd analyze_1d(const Eigen::Ref<const Eigen::VectorXd>& x, const WaveletSpec& spec)
{
	const Index n = x.size();
	require_even(n);
	const Index half = n / 2;
	const auto& ha = spec.analysis_low();
	const auto& ga = spec.analysis_high();
	const Index rh = Index(ha.size()) / 2;
	const Index rg = Index(ga.size()) / 2;

	Eigen::VectorXd out(n);
	for (Index k = 0; k < half; ++k)
	{
		double lo = 0.0;
		for (Index t = -rh; t <= rh; ++t)
			lo += ha[std::size_t(t + rh)] * x[reflect(2 * k + t, n)];
		double hi = 0.0;
		for (Index t = -rg; t <= rg; ++t)
			hi += ga[std::size_t(t + rg)] * x[reflect(2 * k + 1 + t, n)];
		out[k] = lo;
		out[half + k] = hi;
	}
	return out;
}

Eigen::VectorXd synthesize_1d(const Eigen::Ref<const Eigen::VectorXd>& c, const WaveletSpec& spec)
{
	const Index n = c.size();
	require_even(n);
	const Index half = n / 2;
	const auto& hs = spec.synthesis_low();
	const auto& gs = spec.synthesis_high();
	const Index rh = Index(hs.size()) / 2;
	const Index rg = Index(gs.size()) / 2;

	// Low-pass samples live on even positions, high-pass on odd positions; both
	// sequences are symmetric about 0 and n-1, so reflection recovers any index.
	Eigen::VectorXd out(n);
	for (Index m = 0; m < n; ++m)
	{
		double v = 0.0;
		for (Index t = -rh; t <= rh; ++t)
		{
			const Index p = m - t;
			if ((p & 1) == 0)
				v += hs[std::size_t(t + rh)] * c[reflect(p, n) / 2];
		}
		for (Index t = -rg; t <= rg; ++t)
		{
			const Index p = m - t;
			if ((p & 1) != 0)
				v += gs[std::size_t(t + rg)] * c[half + (reflect(p, n) - 1) / 2];
		}
		out[m] = v;
	}
	return out;
}

CoefficientPyramid dwt2(const ImageGrid& x, const WaveletSpec& spec)
{
	const int levels = spec.levels();
	const int div = 1 << levels;
	if (x.width % div != 0 || x.height % div != 0)
		throw std::invalid_argument("dwt2: " + std::to_string(x.width) + "x" + std::to_string(x.height) +
		                            " image is not divisible by 2^" + std::to_string(levels));
	CoefficientPyramid c{levels, x.grid()};
	Index rows = x.height;
	Index cols = x.width;
	for (int l = 0; l < levels; ++l)
	{
		for (Index r = 0; r < rows; ++r)
			c.coeffs.row(r).head(cols) = analyze_1d(c.coeffs.row(r).head(cols).transpose(), spec).transpose();
		for (Index q = 0; q < cols; ++q)
			c.coeffs.col(q).head(rows) = analyze_1d(c.coeffs.col(q).head(rows), spec);
		rows /= 2;
		cols /= 2;
	}
	return c;
}

ImageGrid idwt2(const CoefficientPyramid& c, const WaveletSpec& spec, double extent)
{
	if (c.levels != spec.levels())
		throw std::invalid_argument("idwt2: pyramid has " + std::to_string(c.levels) + " levels, spec has " +
		                            std::to_string(spec.levels()));
	const int div = 1 << c.levels;
	if (c.width() == 0 || c.width() % div != 0 || c.height() % div != 0)
		throw std::invalid_argument("idwt2: pyramid shape inconsistent with its level count");

	CoefficientPyramid::Grid g = c.coeffs;
	for (int l = c.levels - 1; l >= 0; --l)
	{
		const Index rows = g.rows() >> l;
		const Index cols = g.cols() >> l;
		for (Index q = 0; q < cols; ++q)
			g.col(q).head(rows) = synthesize_1d(g.col(q).head(rows), spec);
		for (Index r = 0; r < rows; ++r)
			g.row(r).head(cols) = synthesize_1d(g.row(r).head(cols).transpose(), spec).transpose();
	}
	ImageGrid out(int(g.cols()), int(g.rows()), extent);
	out.grid() = g;
	return out;
}

double wavelet_l1(const ImageGrid& x, const WaveletSpec& spec)
{
	return l1_norm(dwt2(x, spec));
}

}  // namespace superem
