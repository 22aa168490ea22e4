#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace superem {

using Index = Eigen::Index;

/// Square-pixel 2-D image sampled on [-extent, extent]^2.
///
/// Pixels are stored row-major: row 0 is the top of the field of view
/// (largest y), column 0 the left edge (smallest x). Pixel j = row * width + col.
template <typename Scalar>
struct BasicImage
{
	using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
	using Grid = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

	int width = 0;
	int height = 0;
	Scalar extent = 0;
	Vector pixels;

	BasicImage() = default;

	BasicImage(int w, int h, Scalar half_width, Scalar fill = Scalar(0))
		: width(w), height(h), extent(half_width), pixels(Vector::Constant(Index(w) * h, fill))
	{
		if (w <= 0 || h <= 0)
			throw std::invalid_argument("image dimensions must be positive");
	}

	BasicImage(int w, int h, Scalar half_width, Vector values)
		: width(w), height(h), extent(half_width), pixels(std::move(values))
	{
		if (w <= 0 || h <= 0)
			throw std::invalid_argument("image dimensions must be positive");
		if (pixels.size() != Index(w) * h)
			throw std::invalid_argument("pixel count " + std::to_string(pixels.size()) +
			                            " does not match " + std::to_string(w) + "x" + std::to_string(h));
	}

	/// Same geometry, new pixel values.
	template <typename Derived>
	BasicImage with_pixels(const Eigen::MatrixBase<Derived>& values) const
	{
		return BasicImage(width, height, extent, Vector(values));
	}

	Index size() const { return pixels.size(); }

	Scalar& at(int row, int col) { return pixels[Index(row) * width + col]; }
	Scalar at(int row, int col) const { return pixels[Index(row) * width + col]; }

	Eigen::Map<Grid> grid() { return Eigen::Map<Grid>(pixels.data(), height, width); }
	Eigen::Map<const Grid> grid() const { return Eigen::Map<const Grid>(pixels.data(), height, width); }

	Scalar pixel_width() const { return Scalar(2) * extent / Scalar(width); }
	Scalar pixel_height() const { return Scalar(2) * extent / Scalar(height); }
	Scalar center_x(int col) const { return -extent + (Scalar(col) + Scalar(0.5)) * pixel_width(); }
	Scalar center_y(int row) const { return extent - (Scalar(row) + Scalar(0.5)) * pixel_height(); }
};

using ImageGrid = BasicImage<double>;

template <typename Scalar>
bool same_shape(const BasicImage<Scalar>& a, const BasicImage<Scalar>& b)
{
	return a.width == b.width && a.height == b.height;
}

template <typename Scalar>
void require_same_shape(const BasicImage<Scalar>& a, const BasicImage<Scalar>& b)
{
	if (!same_shape(a, b))
		throw std::invalid_argument("image shape mismatch: " + std::to_string(a.width) + "x" +
		                            std::to_string(a.height) + " vs " + std::to_string(b.width) + "x" +
		                            std::to_string(b.height));
}

}  // namespace superem
