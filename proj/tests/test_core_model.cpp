#include "support.hpp"

#include "superem/io.hpp"
#include "superem/kl.hpp"
#include "superem/system_matrix.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>

using namespace superem;
using superem::testing::Gen;

namespace {

// Straight evaluation in extended precision, independent of the library's form.
long double kl_oracle(const Eigen::VectorXd& b, const Eigen::VectorXd& d)
{
	long double sum = 0;
	for (Index i = 0; i < b.size(); ++i)
	{
		const long double bi = b[i], di = d[i];
		sum += bi > 0 ? bi * std::log(bi / di) - bi + di : di;
	}
	return sum;
}

std::filesystem::path scratch(const std::string& name)
{
	auto dir = std::filesystem::temp_directory_path() / "superem-core-tests";
	std::filesystem::create_directories(dir);
	return dir / name;
}

}  // namespace

TEST_CASE("image geometry and validation")
{
	ImageGrid x(4, 2, 2.0, 1.5);
	CHECK(x.size() == 8);
	CHECK(x.pixel_width() == doctest::Approx(1.0));
	CHECK(x.center_x(0) == doctest::Approx(-1.5));
	CHECK(x.center_y(0) == doctest::Approx(1.0));
	CHECK(x.center_y(1) == doctest::Approx(-1.0));
	x.at(1, 2) = 7.0;
	CHECK(x.pixels[1 * 4 + 2] == 7.0);
	CHECK(x.grid()(1, 2) == 7.0);
	CHECK_THROWS_AS(ImageGrid(0, 3, 1.0), std::invalid_argument);
	CHECK_THROWS_AS(ImageGrid(2, 2, 1.0, Eigen::VectorXd::Ones(3)), std::invalid_argument);
}

TEST_CASE("sinogram validation")
{
	CHECK_THROWS_AS(Sinogram(SinogramShape{2, 3, {0.0}}, Eigen::VectorXd::Zero(6)), std::invalid_argument);
	CHECK_THROWS_AS(Sinogram(SinogramShape{2, 3, {0.0, 1.0}}, Eigen::VectorXd::Zero(5)), std::invalid_argument);
	Sinogram s(SinogramShape{2, 3, {0.0, 1.0}}, Eigen::VectorXd::LinSpaced(6, 0, 5));
	CHECK(s.at(1, 0) == 3.0);
	CHECK(s.total() == 15.0);
}

TEST_CASE("project: identity and row-sum examples")
{
	const auto id = SystemMatrix::from_dense(Eigen::Matrix2d::Identity());
	const auto d = project(id, testing::column(Eigen::Vector2d(2, 3)));
	CHECK(d.values[0] == 2.0);
	CHECK(d.values[1] == 3.0);

	const auto row = SystemMatrix::from_dense(Eigen::RowVector2d(1, 1));
	CHECK(project(row, testing::column(Eigen::Vector2d(2, 3))).values[0] == 5.0);
}

TEST_CASE("project: matches dense multiply on random 6x4 systems")
{
	Gen g(11);
	for (int trial = 0; trial < 50; ++trial)
	{
		const Eigen::MatrixXd dense = g.dense_matrix(6, 4, 0.6, false);
		const Eigen::VectorXd x = g.vector(4, 0.0, 3.0);
		const auto a = SystemMatrix::from_dense(dense);
		const Eigen::VectorXd d = project(a, testing::column(x)).values;
		CHECK((d - dense * x).cwiseAbs().maxCoeff() <= 1e-13 * (1.0 + (dense * x).cwiseAbs().maxCoeff()));
	}
}

TEST_CASE("project: errors")
{
	const auto a = SystemMatrix::from_dense(Eigen::MatrixXd::Ones(2, 3));
	CHECK_THROWS_AS(project(a, testing::column(Eigen::Vector2d(1, 1))), std::invalid_argument);
	CHECK_THROWS_AS(project(a, testing::column(Eigen::Vector3d(1, -1, 1))), std::invalid_argument);
}

TEST_CASE("project: linearity and column-sum identity")
{
	Gen g(12);
	for (int trial = 0; trial < 50; ++trial)
	{
		const int m = g.integer(1, 20), n = g.integer(1, 20);
		const auto a = SystemMatrix::from_dense(g.dense_matrix(m, n, 0.5, false));
		const Eigen::VectorXd x = g.vector(n, 0.0, 5.0), y = g.vector(n, 0.0, 5.0);
		const double alpha = g.uniform(0.0, 3.0), beta = g.uniform(0.0, 3.0);
		const Eigen::VectorXd lhs = a.forward(alpha * x + beta * y);
		const Eigen::VectorXd rhs = alpha * a.forward(x) + beta * a.forward(y);
		CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * lhs.cwiseAbs().maxCoeff() + 1e-300);
		CHECK(testing::rel_diff(a.forward(x).sum(), a.column_sums().dot(x)) <= 1e-10);
	}
}

TEST_CASE("system matrix invariants")
{
	Eigen::MatrixXd dense(3, 4);
	dense << 1, 0, 2, 0,  //
		0, 0, 3, 0,       //
		4, 0, 0, 0.5;
	const auto a = SystemMatrix::from_dense(dense);
	CHECK(a.rows() == 3);
	CHECK(a.cols() == 4);
	CHECK(a.nnz() == 5);
	for (Index j = 0; j < 4; ++j)
	{
		CHECK(a.column_sums()[j] == doctest::Approx(dense.col(j).sum()).epsilon(1e-12));
		CHECK(a.active()[j] == (dense.col(j).sum() > 0));
	}
	CHECK(a.num_active() == 3);
	CHECK((a.to_dense() - dense).norm() == 0.0);
	CHECK((Eigen::MatrixXd(a.transposed()) - dense.transpose()).norm() == 0.0);
	CHECK((a.back(Eigen::Vector3d(1, 2, 3)) - dense.transpose() * Eigen::Vector3d(1, 2, 3)).norm() < 1e-14);

	Eigen::MatrixXd bad = dense;
	bad(0, 0) = -1;
	CHECK_THROWS_AS(SystemMatrix::from_dense(bad), std::invalid_argument);
	bad(0, 0) = std::nan("");
	CHECK_THROWS_AS(SystemMatrix::from_dense(bad), std::invalid_argument);
}

TEST_CASE("kl_distance examples")
{
	CHECK(kl_distance(Eigen::Vector2d(1, 3), Eigen::Vector2d(1, 3)) == 0.0);
	const double expected = std::log(0.5) + 3.0 * std::log(1.5);
	CHECK(kl_distance(Eigen::Vector2d(1, 3), Eigen::Vector2d(2, 2)) == doctest::Approx(expected).epsilon(1e-14));
	CHECK(expected == doctest::Approx(0.5232).epsilon(1e-4));
	CHECK(kl_distance(Eigen::Vector2d(0, 2), Eigen::Vector2d(1, 2)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kl_distance errors are distinct")
{
	CHECK_THROWS_AS(kl_distance(Eigen::Vector2d(1, 1), Eigen::Vector3d(1, 1, 1)), std::invalid_argument);
	CHECK_THROWS_AS(kl_distance(Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 0)), InfiniteDistance);
	// b = 0 with d = 0 is a zero term, not an error.
	CHECK(kl_distance(Eigen::Vector2d(0, 1), Eigen::Vector2d(0, 1)) == 0.0);
}

TEST_CASE("kl_distance: nonnegative, zero iff equal, matches extended-precision oracle")
{
	Gen g(13);
	for (int trial = 0; trial < 500; ++trial)
	{
		const Index m = g.integer(1, 30);
		const Eigen::VectorXd b = g.counts(m, g.uniform(0.5, 50.0));
		Eigen::VectorXd d = g.vector(m, 0.01, 60.0);
		const double kl = kl_distance(b, d);
		CHECK(kl >= 0.0);
		const double oracle = double(kl_oracle(b, d));
		CHECK(std::abs(kl - oracle) <= 1e-12 * std::max(1.0, oracle));
		CHECK(kl_distance(b, b) == 0.0);
		// Equality case off b's support requires d = 0 there.
		Eigen::VectorXd near = b;
		for (Index i = 0; i < m; ++i)
			if (b[i] == 0.0)
				near[i] = 1e-3;
		if ((b.array() == 0.0).any())
			CHECK(kl_distance(b, near) > 0.0);
	}
}

TEST_CASE("kl_term stays accurate when d is close to b")
{
	// b ln(b/d) - b + d ~ (d-b)^2 / (2b) for d near b.
	const double b = 1e6, d = b * (1.0 + 1e-9);
	const double approx = (d - b) * (d - b) / (2.0 * b);
	CHECK(kl_term(b, d) == doctest::Approx(approx).epsilon(1e-6));
	CHECK(kl_term(0.0, 2.5) == 2.5);
}

TEST_CASE("kl_distance_masked skips masked entries")
{
	ColumnMask mask(3);
	mask << true, false, true;
	CHECK(kl_distance_masked(Eigen::Vector3d(1, 5, 2), Eigen::Vector3d(1, 0, 2), mask) == 0.0);
}

TEST_CASE("image csv round trip")
{
	Gen g(14);
	const ImageGrid x = g.image(5, 3, 0.0, 100.0);
	const auto path = scratch("image.csv");
	io::write_image_csv(path, x);
	const ImageGrid y = io::read_image_csv(path, 1.0);
	CHECK(y.width == 5);
	CHECK(y.height == 3);
	CHECK((x.pixels - y.pixels).cwiseAbs().maxCoeff() == 0.0);

	std::ofstream(scratch("ragged.csv")) << "1,2\n3\n";
	CHECK_THROWS_AS(io::read_image_csv(scratch("ragged.csv"), 1.0), io::FormatError);
}

TEST_CASE("pgm is 16-bit max-scaled")
{
	ImageGrid x(2, 1, 1.0, Eigen::Vector2d(0.5, 1.0));
	const auto path = scratch("image.pgm");
	io::write_image_pgm(path, x);
	std::ifstream in(path, std::ios::binary);
	std::string header((std::istreambuf_iterator<char>(in)), {});
	CHECK(header.rfind("P5\n2 1\n65535\n", 0) == 0);
	const auto tail = header.substr(header.size() - 4);
	CHECK((unsigned char)tail[2] == 0xff);
	CHECK((unsigned char)tail[3] == 0xff);
}

TEST_CASE("sinogram csv round trip")
{
	Gen g(15);
	const Sinogram s(SinogramShape{3, 4, {0.0, 0.5, 1.0}}, g.vector(12, 0.0, 9.0));
	const auto path = scratch("sino.csv");
	io::write_sinogram_csv(path, s);
	const Sinogram t = io::read_sinogram_csv(path);
	CHECK(t.shape == s.shape);
	CHECK((t.values - s.values).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("matrix cache round trip")
{
	Gen g(16);
	const SinogramShape shape{2, 3, {0.0, 1.0}};
	const auto a = SystemMatrix(SystemMatrix::from_dense(g.dense_matrix(6, 5, 0.4, false)).matrix(), shape);
	const auto path = scratch("a.bin");
	io::write_matrix_cache(path, a);
	const SystemMatrix b = io::read_matrix_cache(path, shape);
	CHECK(b.shape() == shape);
	CHECK((a.to_dense() - b.to_dense()).cwiseAbs().maxCoeff() == 0.0);
	CHECK((a.column_sums() - b.column_sums()).cwiseAbs().maxCoeff() == 0.0);

	std::ofstream(scratch("short.bin"), std::ios::binary) << "abc";
	CHECK_THROWS_AS(io::read_matrix_cache(scratch("short.bin"), shape), io::FormatError);
}

TEST_CASE("content hash is stable and sensitive")
{
	const auto h1 = io::ContentHash().text("abc").hex();
	CHECK(h1 == io::ContentHash().text("abc").hex());
	CHECK(h1 != io::ContentHash().text("abd").hex());
	// FNV-1a 64 test vector.
	CHECK(io::ContentHash().text("a").digest() == 0xaf63dc4c8601ec8cULL);
}
