#pragma once

#include "superem/phantom.hpp"
#include "superem/superiorizer.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace superem {

enum class Scale
{
	desk,
	paper
};

Scale parse_scale(std::string_view s);
std::string_view to_string(Scale s);

struct InitialImageSpec
{
	enum class Mode
	{
		/// Every active pixel set to c = (1/N) sum_i b_i.
		uniform_c,
		/// Independent draws from U[low, high].
		random_uniform
	};
	Mode mode = Mode::uniform_c;
	double low = 1.0;
	double high = 2.0;
	std::uint64_t seed = 7;
};

struct ReferenceSpec
{
	int trials = 20;
	int iterations = 30;
	/// Trial m uses noise seed seed_base + m.
	std::uint64_t seed_base = 1000000;
};

/// Superiorization parameters shared by every algorithm of an experiment.
/// beta0 is given as a multiple of c = (1/N) sum_i b_i.
struct SuperiorizationDefaults
{
	double beta0_tv = 0.5;
	double beta0_l1 = 0.1;
	double gamma = 0.5;
	double q1 = 0.01;
	double rho = 1e-6;
	int max_inner_tries = 40;
	int max_outer_iters = 30;
	double beta_stop_threshold = 0.0;
	BoundEstimate bound_estimate = BoundEstimate::count_fraction;
	int wavelet_levels = 3;
	double tv_smoothing = 1e-8;
};

/// Algorithm ids: "em" or "<tv|hard|soft>_alg<1|2>" with an optional "_nophi" suffix.
struct AlgorithmId
{
	std::string name;
	bool classic = false;
	PhiScheme phi = PhiScheme::tv;
	Variant variant = Variant::alg2;
};

AlgorithmId parse_algorithm(std::string_view id);

struct ExperimentConfig
{
	std::string name = "experiment1";
	int experiment = 1;
	PhantomSpec phantom;
	GridSpec grid;
	AcquisitionSpec acquisition;
	InitialImageSpec initial;
	ReferenceSpec reference;
	SuperiorizationDefaults superiorization;
	std::vector<std::string> algorithms;
	/// Iterations for classic EM runs.
	int em_iterations = 30;
	/// Also run every algorithm from the uniform image (robustness comparison).
	bool compare_uniform_init = false;
	/// Worker threads for algorithm runs and reference trials (0 = hardware).
	int jobs = 0;
	std::filesystem::path output_dir = "results";
	/// Directory for cached system matrices; empty disables caching.
	std::filesystem::path matrix_cache;

	void validate() const;

	/// Resolved configuration for algorithm `id` given the data-derived c.
	SuperiorizerConfig algorithm_config(const AlgorithmId& id, double c) const;
};

/// Built-in protocol for experiments 1-4 at either scale.
ExperimentConfig preset(int experiment, Scale scale);

/// Sectioned key/value (INI) file; keys absent from the file keep the values
/// of `base`.
ExperimentConfig load_config(const std::filesystem::path& path, const ExperimentConfig& base);
ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const std::filesystem::path& path, const ExperimentConfig& cfg);

/// Canonical text of the fully resolved configuration, and its hash.
std::string resolved_text(const ExperimentConfig& cfg);
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace superem
