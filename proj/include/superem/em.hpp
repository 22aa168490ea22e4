#pragma once

#include "superem/image.hpp"
#include "superem/sinogram.hpp"
#include "superem/system_matrix.hpp"

#include <vector>

namespace superem {

/// Measured data, system matrix and scratch buffers for one EM run.
///
/// Holds a reference to the matrix; the matrix must outlive the workspace.
/// Not shareable between concurrent loops: copy it per run.
class EmWorkspace
{
public:
	/// `floor_scale` sets the ray-sum floor eps = floor_scale * (sum b / M).
	EmWorkspace(const SystemMatrix& a, Sinogram b, double floor_scale = 1e-12);

	const SystemMatrix& matrix() const { return *a_; }
	const Sinogram& data() const { return b_; }
	double floor() const { return floor_; }
	/// B = sum_i b_i.
	double total_counts() const { return total_; }

	/// Fills ray_sums() with d(x) and returns the back-projected ratio
	/// sum_i a_ij b_i / max(d_i, eps).
	const Eigen::VectorXd& back_ratio(const ImageGrid& x);
	const Eigen::VectorXd& ray_sums() const { return d_; }

private:
	const SystemMatrix* a_;
	Sinogram b_;
	double floor_ = 0.0;
	double total_ = 0.0;
	Eigen::VectorXd d_;
	Eigen::VectorXd ratio_;
	Eigen::VectorXd back_;
};

/// x_j f_j(x) on active columns, 0 on columns with H_j = 0.
/// Throws std::invalid_argument for a negative pixel or a shape mismatch.
ImageGrid em_step(EmWorkspace& w, const ImageGrid& x);

/// f_j(x) = (1/H_j) sum_i a_ij b_i / d_i(x); 0 on masked columns.
Eigen::VectorXd em_factors(EmWorkspace& w, const ImageGrid& x);

/// I_A^b(x) = I(b, A x). Throws InfiniteDistance if some b_i > 0 has d_i(x) = 0.
double kl_objective(const EmWorkspace& w, const ImageGrid& x);

/// dI_A^b/dx_j = H_j (1 - f_j(x)).
Eigen::VectorXd kl_gradient(EmWorkspace& w, const ImageGrid& x);

struct EmIterate
{
	ImageGrid x;
	double kl;
};

/// Classic EM from x0; entry 0 is x0 itself, entry k the k-th iterate.
std::vector<EmIterate> run_classic_em(EmWorkspace& w, const ImageGrid& x0, int iters);

/// D(x) = I(P(x), x) over active columns; zero exactly at fixed points.
double fixed_point_residual(EmWorkspace& w, const ImageGrid& x);

/// Column-weighted image divergence sum_j H_j [p_j ln(p_j/q_j) - p_j + q_j] on active columns.
/// With H_j = 1 this is I(p, q); in general it is I(Hp, Hq), the distance in the
/// rescaled variables where the matrix has unit column sums.
double weighted_image_kl(const SystemMatrix& a, const ImageGrid& p, const ImageGrid& q);

struct KtReport
{
	/// max |f_j - 1| over active j with x_j > tol.
	double support_violation = 0.0;
	/// max (f_j - 1) over active j with x_j <= tol (0 when that set is empty).
	double zero_set_violation = 0.0;
	Index support_size = 0;
	Index zero_set_size = 0;

	double max_violation() const;
};

/// Kuhn-Tucker check for minimizers of I_A^b on the nonnegative orthant.
KtReport kt_check(EmWorkspace& w, const ImageGrid& x, double tol);

}  // namespace superem
