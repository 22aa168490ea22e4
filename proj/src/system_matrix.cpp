#include "superem/system_matrix.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace superem {

SystemMatrix::SystemMatrix(Storage a, SinogramShape shape) : a_(std::move(a)), shape_(std::move(shape))
{
	finish();
}

SystemMatrix::SystemMatrix(Storage a) : a_(std::move(a)), shape_(SinogramShape::flat(a_.rows()))
{
	finish();
}

SystemMatrix SystemMatrix::from_dense(const Eigen::MatrixXd& dense)
{
	Storage s = dense.sparseView();
	return SystemMatrix(std::move(s));
}

SystemMatrix SystemMatrix::from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries,
                                         SinogramShape shape)
{
	Storage s(rows, cols);
	s.setFromTriplets(entries.begin(), entries.end());
	return SystemMatrix(std::move(s), std::move(shape));
}

void SystemMatrix::finish()
{
	if (shape_.size() != a_.rows())
		throw std::invalid_argument("sinogram shape describes " + std::to_string(shape_.size()) +
		                            " rays but the matrix has " + std::to_string(a_.rows()) + " rows");
	a_.makeCompressed();
	const double* v = a_.valuePtr();
	for (Index k = 0; k < a_.nonZeros(); ++k)
		if (!(v[k] >= 0.0) || !std::isfinite(v[k]))
			throw std::invalid_argument("system matrix entries must be finite and nonnegative");

	at_ = Storage(a_.transpose());
	at_.makeCompressed();

	// Row sums of A^T, accumulated in fixed order.
	column_sums_.resize(a_.cols());
	for (Index j = 0; j < at_.outerSize(); ++j)
	{
		double h = 0.0;
		for (Storage::InnerIterator it(at_, j); it; ++it)
			h += it.value();
		column_sums_[j] = h;
	}
	active_ = column_sums_.array() > 0.0;
	num_active_ = active_.count();
}

namespace {

Eigen::VectorXd gather(const SystemMatrix::Storage& m, const Eigen::Ref<const Eigen::VectorXd>& x)
{
	Eigen::VectorXd out(m.rows());
	for (Index i = 0; i < m.outerSize(); ++i)
	{
		double s = 0.0;
		for (SystemMatrix::Storage::InnerIterator it(m, i); it; ++it)
			s += it.value() * x[it.col()];
		out[i] = s;
	}
	return out;
}

}  // namespace

Eigen::VectorXd SystemMatrix::forward(const Eigen::Ref<const Eigen::VectorXd>& x) const
{
	if (x.size() != cols())
		throw std::invalid_argument("forward: image has " + std::to_string(x.size()) +
		                            " pixels, matrix has " + std::to_string(cols()) + " columns");
	return gather(a_, x);
}

Eigen::VectorXd SystemMatrix::back(const Eigen::Ref<const Eigen::VectorXd>& r) const
{
	if (r.size() != rows())
		throw std::invalid_argument("back: sinogram has " + std::to_string(r.size()) +
		                            " values, matrix has " + std::to_string(rows()) + " rows");
	return gather(at_, r);
}

Sinogram project(const SystemMatrix& a, const ImageGrid& x)
{
	if ((x.pixels.array() < 0.0).any())
		throw std::invalid_argument("project: image has negative pixels");
	return Sinogram(a.shape(), a.forward(x.pixels));
}

}  // namespace superem
