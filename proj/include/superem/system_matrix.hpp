#pragma once

#include "superem/image.hpp"
#include "superem/sinogram.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <vector>

namespace superem {

using ColumnMask = Eigen::Array<bool, Eigen::Dynamic, 1>;

/// Nonnegative sparse system matrix A (rays x pixels).
///
/// Row-compressed for the forward pass; a row-compressed copy of A^T is built
/// once so the back projection is also a sequential gather. Column sums H_j and
/// the active-column mask (H_j > 0) are cached at construction.
class SystemMatrix
{
public:
	using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
	using Triplet = Eigen::Triplet<double, std::int64_t>;

	SystemMatrix() = default;

	/// Throws std::invalid_argument on negative or non-finite entries, or if
	/// `shape` does not describe A.rows() rays.
	SystemMatrix(Storage a, SinogramShape shape);
	explicit SystemMatrix(Storage a);

	static SystemMatrix from_dense(const Eigen::MatrixXd& dense);
	static SystemMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& entries,
	                                  SinogramShape shape);

	Index rows() const { return a_.rows(); }
	Index cols() const { return a_.cols(); }
	Index nnz() const { return a_.nonZeros(); }

	const Storage& matrix() const { return a_; }
	const Storage& transposed() const { return at_; }
	const SinogramShape& shape() const { return shape_; }

	const Eigen::VectorXd& column_sums() const { return column_sums_; }
	const ColumnMask& active() const { return active_; }
	Index num_active() const { return num_active_; }

	/// d = A x.
	Eigen::VectorXd forward(const Eigen::Ref<const Eigen::VectorXd>& x) const;
	/// A^T r.
	Eigen::VectorXd back(const Eigen::Ref<const Eigen::VectorXd>& r) const;

	Eigen::MatrixXd to_dense() const { return Eigen::MatrixXd(a_); }

private:
	void finish();

	Storage a_;
	Storage at_;
	SinogramShape shape_;
	Eigen::VectorXd column_sums_;
	ColumnMask active_;
	Index num_active_ = 0;
};

/// d(x) = A x as a sinogram. Throws on dimension mismatch or negative pixels.
Sinogram project(const SystemMatrix& a, const ImageGrid& x);

}  // namespace superem
