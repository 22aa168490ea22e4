#pragma once

#include "superem/config.hpp"
#include "superem/phantom.hpp"
#include "superem/sinogram.hpp"
#include "superem/system_matrix.hpp"
#include "superem/trajectory.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace superem {

/// Noise-free part of an experiment: phantom, system matrix, expected counts.
struct Problem
{
	PhantomImages phantom;
	SystemMatrix matrix;
	Sinogram noise_free;
};

/// Rasterizes the phantom and builds (or loads from cfg.matrix_cache) the matrix.
Problem build_problem(const ExperimentConfig& cfg);

/// Poisson counts at the configured total for noise seed `seed`.
Sinogram measure(const Problem& problem, const ExperimentConfig& cfg, std::uint64_t seed);

/// c = (1/N) sum_i b_i over the N active columns.
double uniform_level(const SystemMatrix& a, const Sinogram& b);

ImageGrid initial_image(const ExperimentConfig& cfg, const SystemMatrix& a, const Sinogram& b,
                        const InitialImageSpec& spec);

/// Mean of classic-EM reconstructions (uniform start, `iters` iterations) of each data set.
ImageGrid mean_em_image(const SystemMatrix& a, const std::vector<Sinogram>& data, const GridSpec& grid, int iters,
                        int jobs = 1);

/// Reference image from cfg.reference.trials noise trials with seeds seed_base + m.
ImageGrid build_reference(const Problem& problem, const ExperimentConfig& cfg);

/// Fills tv, l1 and (with a reference) mse on every row.
void annotate(Trajectory& t, const WaveletSpec& wavelet, const ImageGrid* reference);

struct SummaryRow
{
	std::string algorithm;
	std::string init;
	double tv = 0.0;
	double l1 = 0.0;
	double mse = 0.0;
	double rmse = 0.0;
	double kl = 0.0;
	double beta = 0.0;
	int iteration = 0;
};

struct AlgorithmResult
{
	std::string algorithm;
	/// "uniform" or "random".
	std::string init;
	Trajectory trajectory;
	/// Index of the best-MSE iterate.
	std::size_t best = 0;
	SummaryRow summary;
};

/// Runs one algorithm and selects its best-MSE iterate against `reference`.
AlgorithmResult run_algorithm(const ExperimentConfig& cfg, const SystemMatrix& a, const Sinogram& b,
                              const std::string& algorithm, const ImageGrid& x0, const std::string& init,
                              const ImageGrid& reference);

struct ExperimentResult
{
	std::uint64_t seed = 0;
	std::string config_hash;
	ImageGrid reference;
	/// Self-metrics of the reference image (RMSE 0 by construction).
	SummaryRow reference_row;
	std::vector<AlgorithmResult> runs;
	std::filesystem::path directory;

	const AlgorithmResult& find(const std::string& algorithm, const std::string& init = "") const;
};

struct RunOptions
{
	/// Write outputs under cfg.output_dir / "seed-<seed>".
	bool write_outputs = true;
	/// Keep every iterate in memory (otherwise only the best one is retained).
	bool keep_iterates = false;
};

/// Full protocol for one (experiment, seed): data, reference, every algorithm,
/// best-MSE selection, CSV/PGM outputs. A reference computed earlier for the same
/// data configuration can be passed in to skip the trials.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem, const ImageGrid* reference = nullptr,
                                const RunOptions& options = {});
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// Table layout: one column per algorithm, rows TV (x1e3), l1 (x1e3), RMSE, iteration.
std::string render_summary(const std::vector<SummaryRow>& rows);
void write_summary_csv(const std::filesystem::path& path, const std::vector<SummaryRow>& rows);

/// Rebuilds summary rows from a result directory's per-algorithm metrics CSVs.
std::vector<SummaryRow> summarize_directory(const std::filesystem::path& dir);

}  // namespace superem
