#include "superem/harness.hpp"

#include "superem/em.hpp"
#include "superem/io.hpp"
#include "superem/metrics.hpp"
#include "superem/noise.hpp"
#include "superem/perturbation.hpp"
#include "superem/projector.hpp"
#include "superem/superiorizer.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace superem {

namespace fs = std::filesystem;

namespace {

int resolve_jobs(int jobs)
{
	if (jobs > 0)
		return jobs;
	return std::max(1, int(std::thread::hardware_concurrency()));
}

// Runs f(0..n-1) on up to `jobs` threads; rethrows the first failure.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& f)
{
	const std::size_t workers = std::min<std::size_t>(n, std::size_t(resolve_jobs(jobs)));
	if (workers <= 1)
	{
		for (std::size_t i = 0; i < n; ++i)
			f(i);
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr error;
	std::mutex error_mutex;
	std::vector<std::thread> pool;
	for (std::size_t w = 0; w < workers; ++w)
		pool.emplace_back([&] {
			for (std::size_t i = next++; i < n; i = next++)
			{
				try
				{
					f(i);
				}
				catch (...)
				{
					std::lock_guard lock(error_mutex);
					if (!error)
						error = std::current_exception();
				}
			}
		});
	for (auto& t : pool)
		t.join();
	if (error)
		std::rethrow_exception(error);
}

std::string matrix_key(const ImageGrid& mu, const AcquisitionSpec& acq)
{
	io::ContentHash h;
	h.value(mu.width).value(mu.height).value(mu.extent);
	h.bytes(mu.pixels.data(), std::size_t(mu.size()) * sizeof(double));
	h.value(acq.num_views).value(acq.num_bins).value(acq.angular_range);
	return h.hex();
}

}  // namespace

Problem build_problem(const ExperimentConfig& cfg)
{
	PhantomImages phantom = rasterize_phantom(cfg.phantom, cfg.grid);
	const SinogramShape shape{cfg.acquisition.num_views, cfg.acquisition.num_bins, cfg.acquisition.view_angles()};
	std::optional<SystemMatrix> a;
	fs::path cache;
	if (!cfg.matrix_cache.empty())
	{
		cache = cfg.matrix_cache / ("A-" + matrix_key(phantom.attenuation, cfg.acquisition) + ".bin");
		if (fs::exists(cache))
			a = io::read_matrix_cache(cache, shape);
	}
	if (!a)
	{
		a = build_system_matrix(phantom.attenuation, cfg.acquisition);
		if (!cache.empty())
		{
			fs::create_directories(cfg.matrix_cache);
			io::write_matrix_cache(cache, *a);
		}
	}
	Sinogram noise_free = project(*a, phantom.activity);
	return Problem{std::move(phantom), std::move(*a), std::move(noise_free)};
}

Sinogram measure(const Problem& problem, const ExperimentConfig& cfg, std::uint64_t seed)
{
	return simulate_counts(problem.noise_free, cfg.acquisition.target_counts, seed);
}

double uniform_level(const SystemMatrix& a, const Sinogram& b)
{
	if (a.num_active() == 0)
		throw std::invalid_argument("uniform_level: matrix has no active columns");
	return b.total() / double(a.num_active());
}

ImageGrid initial_image(const ExperimentConfig& cfg, const SystemMatrix& a, const Sinogram& b,
                        const InitialImageSpec& spec)
{
	ImageGrid x(cfg.grid.width, cfg.grid.height, cfg.grid.extent);
	if (x.size() != a.cols())
		throw std::invalid_argument("initial_image: grid does not match the matrix");
	if (spec.mode == InitialImageSpec::Mode::uniform_c)
	{
		x.pixels.setConstant(uniform_level(a, b));
	}
	else
	{
		boost::random::mt19937_64 rng(spec.seed);
		boost::random::uniform_real_distribution<double> u(spec.low, spec.high);
		for (Index j = 0; j < x.size(); ++j)
			x.pixels[j] = u(rng);
	}
	for (Index j = 0; j < x.size(); ++j)
		if (!a.active()[j])
			x.pixels[j] = 0.0;
	return x;
}

ImageGrid mean_em_image(const SystemMatrix& a, const std::vector<Sinogram>& data, const GridSpec& grid, int iters,
                        int jobs)
{
	if (data.empty())
		throw std::invalid_argument("mean_em_image: no data sets");
	std::vector<ImageGrid> recon(data.size());
	parallel_for(data.size(), jobs, [&](std::size_t m) {
		EmWorkspace w(a, data[m]);
		ImageGrid x(grid.width, grid.height, grid.extent, uniform_level(a, data[m]));
		for (int k = 0; k < iters; ++k)
			x = em_step(w, x);
		recon[m] = std::move(x);
	});
	ImageGrid mean = recon[0].with_pixels(Eigen::VectorXd::Zero(recon[0].size()));
	for (const auto& r : recon)
		mean.pixels += r.pixels;
	mean.pixels /= double(recon.size());
	return mean;
}

ImageGrid build_reference(const Problem& problem, const ExperimentConfig& cfg)
{
	const auto& ref = cfg.reference;
	if (ref.trials < 2)
		throw std::invalid_argument("build_reference: need at least 2 trials");
	std::vector<Sinogram> data;
	data.reserve(std::size_t(ref.trials));
	for (int m = 0; m < ref.trials; ++m)
		data.push_back(measure(problem, cfg, ref.seed_base + std::uint64_t(m)));
	return mean_em_image(problem.matrix, data, cfg.grid, ref.iterations, cfg.jobs);
}

void annotate(Trajectory& t, const WaveletSpec& wavelet, const ImageGrid* reference)
{
	for (std::size_t k = 0; k < t.rows.size(); ++k)
	{
		const ImageGrid& x = t.iterates[k];
		t.rows[k].tv = tv_value(x);
		t.rows[k].l1 = wavelet_l1(x, wavelet);
		if (reference)
			t.rows[k].mse = mse(x, *reference);
	}
}

AlgorithmResult run_algorithm(const ExperimentConfig& cfg, const SystemMatrix& a, const Sinogram& b,
                              const std::string& algorithm, const ImageGrid& x0, const std::string& init,
                              const ImageGrid& reference)
{
	const AlgorithmId id = parse_algorithm(algorithm);
	const SuperiorizerConfig sc = cfg.algorithm_config(id, uniform_level(a, b));
	EmWorkspace w(a, b);
	AlgorithmResult r;
	r.algorithm = algorithm;
	r.init = init;
	r.trajectory = id.classic ? classic_trajectory(w, x0, cfg.em_iterations) : run_superiorized(w, x0, sc);
	annotate(r.trajectory, sc.wavelet, &reference);

	const auto& rows = r.trajectory.rows;
	r.best = 0;
	for (std::size_t k = 1; k < rows.size(); ++k)
		if (rows[k].mse < rows[r.best].mse)
			r.best = k;
	const auto& row = rows[r.best];
	r.summary = SummaryRow{algorithm, init, row.tv, row.l1, row.mse,
	                       rmse(r.trajectory.iterates[r.best], reference), row.kl, row.beta, row.k};
	return r;
}

const AlgorithmResult& ExperimentResult::find(const std::string& algorithm, const std::string& init) const
{
	for (const auto& r : runs)
		if (r.algorithm == algorithm && (init.empty() || r.init == init))
			return r;
	throw std::out_of_range("no run for algorithm '" + algorithm + "'" + (init.empty() ? "" : " (" + init + ")"));
}

namespace {

std::string init_name(InitialImageSpec::Mode m)
{
	return m == InitialImageSpec::Mode::uniform_c ? "uniform" : "random";
}

void write_beta_series(const fs::path& path, const std::vector<AlgorithmResult>& runs)
{
	std::ofstream out(path);
	if (!out)
		throw std::runtime_error("cannot write " + path.string());
	std::size_t len = 0;
	out << "k";
	for (const auto& r : runs)
	{
		out << ",ln1p_beta:" << r.algorithm << '.' << r.init;
		len = std::max(len, r.trajectory.rows.size());
	}
	out << '\n' << std::setprecision(17);
	for (std::size_t k = 0; k < len; ++k)
	{
		out << k;
		for (const auto& r : runs)
		{
			out << ',';
			if (k < r.trajectory.rows.size())
				out << std::log1p(r.trajectory.rows[k].beta);
		}
		out << '\n';
	}
}

void write_manifest(const fs::path& dir, const ExperimentConfig& cfg, const ExperimentResult& result)
{
	save_config(dir / "config.ini", cfg);
	std::ofstream out(dir / "manifest.txt");
	out << "config_hash=" << result.config_hash << '\n';
	out << "seed=" << result.seed << '\n';
	out << "experiment=" << cfg.experiment << '\n';
	out << "grid=" << cfg.grid.width << 'x' << cfg.grid.height << '\n';
	out << "views=" << cfg.acquisition.num_views << '\n';
	out << "counts=" << cfg.acquisition.target_counts << '\n';
	out << "reference_trials=" << cfg.reference.trials << '\n';
	out << "algorithms=";
	for (std::size_t i = 0; i < cfg.algorithms.size(); ++i)
		out << (i ? "," : "") << cfg.algorithms[i];
	out << '\n';
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, const Problem& problem, const ImageGrid* reference,
                                const RunOptions& options)
{
	cfg.validate();
	ExperimentResult result;
	result.seed = cfg.acquisition.seed;
	result.config_hash = config_hash(cfg);
	result.reference = reference ? *reference : build_reference(problem, cfg);

	const Sinogram b = measure(problem, cfg, cfg.acquisition.seed);
	const WaveletSpec wavelet = WaveletSpec::bior68(cfg.superiorization.wavelet_levels);
	result.reference_row = SummaryRow{"reference", "-", tv_value(result.reference),
	                                  wavelet_l1(result.reference, wavelet), 0.0, 0.0,
	                                  kl_objective(EmWorkspace(problem.matrix, b), result.reference), 0.0,
	                                  cfg.reference.iterations};

	struct Job
	{
		std::string algorithm;
		std::string init;
		const ImageGrid* x0;
	};
	const ImageGrid x0 = initial_image(cfg, problem.matrix, b, cfg.initial);
	InitialImageSpec uniform = cfg.initial;
	uniform.mode = InitialImageSpec::Mode::uniform_c;
	const ImageGrid x0_uniform = initial_image(cfg, problem.matrix, b, uniform);
	const bool extra = cfg.compare_uniform_init && cfg.initial.mode != InitialImageSpec::Mode::uniform_c;

	std::vector<Job> jobs;
	for (const auto& a : cfg.algorithms)
		jobs.push_back({a, init_name(cfg.initial.mode), &x0});
	if (extra)
		for (const auto& a : cfg.algorithms)
			jobs.push_back({a, "uniform", &x0_uniform});

	if (options.write_outputs)
	{
		result.directory = cfg.output_dir / ("seed-" + std::to_string(result.seed));
		fs::create_directories(result.directory / "metrics");
		fs::create_directories(result.directory / "images");
		write_manifest(result.directory, cfg, result);
		io::write_image_csv(result.directory / "reference.csv", result.reference);
		io::write_image_pgm(result.directory / "reference.pgm", result.reference);
		io::write_sinogram_csv(result.directory / "sinogram.csv", b);
	}

	result.runs.resize(jobs.size());
	parallel_for(jobs.size(), cfg.jobs, [&](std::size_t i) {
		AlgorithmResult r =
			run_algorithm(cfg, problem.matrix, b, jobs[i].algorithm, *jobs[i].x0, jobs[i].init, result.reference);
		if (options.write_outputs)
		{
			const std::string stem = r.algorithm + "." + r.init;
			write_trajectory_csv(result.directory / "metrics" / (stem + ".csv"), r.trajectory);
			const ImageGrid& best = r.trajectory.iterates[r.best];
			io::write_image_csv(result.directory / "images" / (stem + ".csv"), best);
			io::write_image_pgm(result.directory / "images" / (stem + ".pgm"), best);
		}
		if (!options.keep_iterates)
		{
			ImageGrid best = std::move(r.trajectory.iterates[r.best]);
			r.trajectory.iterates = {std::move(best)};
			r.best = 0;
		}
		result.runs[i] = std::move(r);
	});

	if (options.write_outputs)
	{
		std::vector<SummaryRow> rows{result.reference_row};
		for (const auto& r : result.runs)
			rows.push_back(r.summary);
		write_summary_csv(result.directory / "summary.csv", rows);
		std::ofstream(result.directory / "summary.txt") << render_summary(rows);
		write_beta_series(result.directory / "beta_series.csv", result.runs);
	}
	return result;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& options)
{
	cfg.validate();
	return run_experiment(cfg, build_problem(cfg), nullptr, options);
}

std::string render_summary(const std::vector<SummaryRow>& rows)
{
	std::ostringstream out;
	const int w = 18;
	const auto label = [](const SummaryRow& r) {
		return r.init.empty() || r.init == "-" || r.init == "uniform" ? r.algorithm : r.algorithm + "(" + r.init + ")";
	};
	out << std::left << std::setw(14) << "" << std::right;
	for (const auto& r : rows)
		out << std::setw(w) << label(r);
	out << '\n' << std::fixed;
	out << std::left << std::setw(14) << "TV(x1e3)" << std::right << std::setprecision(3);
	for (const auto& r : rows)
		out << std::setw(w) << r.tv / 1e3;
	out << '\n' << std::left << std::setw(14) << "l1(x1e3)" << std::right;
	for (const auto& r : rows)
		out << std::setw(w) << r.l1 / 1e3;
	out << '\n' << std::left << std::setw(14) << "RMSE" << std::right << std::setprecision(4);
	for (const auto& r : rows)
		out << std::setw(w) << r.rmse;
	out << '\n' << std::left << std::setw(14) << "iteration" << std::right;
	for (const auto& r : rows)
		out << std::setw(w) << r.iteration;
	out << '\n';
	return out.str();
}

void write_summary_csv(const fs::path& path, const std::vector<SummaryRow>& rows)
{
	std::ofstream out(path);
	if (!out)
		throw std::runtime_error("cannot write " + path.string());
	out << "algorithm,init,tv,l1,mse,rmse,kl,beta,iteration\n" << std::setprecision(17);
	for (const auto& r : rows)
		out << r.algorithm << ',' << r.init << ',' << r.tv << ',' << r.l1 << ',' << r.mse << ',' << r.rmse << ','
		    << r.kl << ',' << r.beta << ',' << r.iteration << '\n';
}

std::vector<SummaryRow> summarize_directory(const fs::path& dir)
{
	const fs::path metrics = dir / "metrics";
	if (!fs::is_directory(metrics))
		throw std::runtime_error(dir.string() + " has no metrics/ directory");
	const ImageGrid reference = io::read_image_csv(dir / "reference.csv", 1.0);
	const double ref_energy = reference.pixels.squaredNorm();
	const double n = double(reference.size());

	// Column order follows the run's config when present, file order otherwise.
	std::vector<std::string> order;
	int levels = 3, reference_iters = 0;
	if (fs::exists(dir / "config.ini"))
	{
		const ExperimentConfig cfg = load_config(dir / "config.ini");
		order = cfg.algorithms;
		levels = cfg.superiorization.wavelet_levels;
		reference_iters = cfg.reference.iterations;
	}
	std::vector<fs::path> files;
	for (const auto& entry : fs::directory_iterator(metrics))
		if (entry.path().extension() == ".csv")
			files.push_back(entry.path());
	const auto rank = [&](const fs::path& p) {
		const std::string stem = p.stem().string();
		const std::string algo = stem.substr(0, stem.rfind('.'));
		const auto it = std::find(order.begin(), order.end(), algo);
		return std::make_pair(std::string(stem.substr(stem.rfind('.') + 1)) == "uniform" ? 1 : 0,
		                      std::make_pair(std::distance(order.begin(), it), stem));
	};
	std::sort(files.begin(), files.end(), [&](const fs::path& a, const fs::path& b) { return rank(a) < rank(b); });

	std::vector<SummaryRow> rows;
	rows.push_back({"reference", "-", tv_value(reference), wavelet_l1(reference, WaveletSpec::bior68(levels)), 0.0,
	                0.0, kNotAvailable, 0.0, reference_iters});
	for (const auto& path : files)
	{
		const auto traj = read_trajectory_csv(path);
		if (traj.empty())
			continue;
		std::size_t best = 0;
		for (std::size_t k = 1; k < traj.size(); ++k)
			if (traj[k].mse < traj[best].mse)
				best = k;
		const auto& r = traj[best];
		const std::string stem = path.stem().string();
		const auto dot = stem.rfind('.');
		SummaryRow row;
		row.algorithm = stem.substr(0, dot);
		row.init = dot == std::string::npos ? "" : stem.substr(dot + 1);
		row.tv = r.tv;
		row.l1 = r.l1;
		row.mse = r.mse;
		row.rmse = ref_energy > 0.0 ? std::sqrt(r.mse * n / ref_energy) : kNotAvailable;
		row.kl = r.kl;
		row.beta = r.beta;
		row.iteration = r.k;
		rows.push_back(row);
	}
	return rows;
}

}  // namespace superem
