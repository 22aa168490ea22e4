#include "superem/config.hpp"
#include "superem/em.hpp"
#include "superem/harness.hpp"
#include "superem/io.hpp"
#include "superem/metrics.hpp"
#include "superem/superiorizer.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace superem;

namespace {

struct CommonOptions
{
	std::string config;
	std::string scale = "desk";
	int experiment = 1;
	std::optional<std::uint64_t> seed;
	std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool with_seed)
{
	cmd->add_option("--config", o.config, "Sectioned key/value config file")->check(CLI::ExistingFile);
	cmd->add_option("--scale", o.scale, "Built-in protocol scale")->check(CLI::IsMember({"desk", "paper"}));
	cmd->add_option("--experiment", o.experiment, "Built-in experiment preset")->check(CLI::Range(1, 4));
	if (with_seed)
		cmd->add_option("--seed", o.seed, "Noise seed");
	cmd->add_option("--out", o.out, "Output directory");
}

ExperimentConfig resolve(const CommonOptions& o)
{
	ExperimentConfig cfg = preset(o.experiment, parse_scale(o.scale));
	if (!o.config.empty())
		cfg = load_config(o.config, cfg);
	if (o.seed)
		cfg.acquisition.seed = *o.seed;
	if (!o.out.empty())
		cfg.output_dir = o.out;
	cfg.validate();
	return cfg;
}

int cmd_phantom(const CommonOptions& o)
{
	const ExperimentConfig cfg = resolve(o);
	const PhantomImages p = rasterize_phantom(cfg.phantom, cfg.grid);
	fs::create_directories(cfg.output_dir);
	io::write_image_csv(cfg.output_dir / "activity.csv", p.activity);
	io::write_image_pgm(cfg.output_dir / "activity.pgm", p.activity);
	io::write_image_csv(cfg.output_dir / "attenuation.csv", p.attenuation);
	io::write_image_pgm(cfg.output_dir / "attenuation.pgm", p.attenuation);
	std::cout << "wrote " << cfg.grid.width << "x" << cfg.grid.height << " phantom to " << cfg.output_dir << '\n';
	return 0;
}

int cmd_simulate(const CommonOptions& o)
{
	const ExperimentConfig cfg = resolve(o);
	const Problem problem = build_problem(cfg);
	const Sinogram b = measure(problem, cfg, cfg.acquisition.seed);
	fs::create_directories(cfg.output_dir);
	io::write_sinogram_csv(cfg.output_dir / "noise_free.csv", problem.noise_free);
	io::write_sinogram_csv(cfg.output_dir / "sinogram.csv", b);
	save_config(cfg.output_dir / "config.ini", cfg);
	std::cout << "wrote " << cfg.acquisition.num_views << "x" << cfg.acquisition.num_bins << " sinogram ("
	          << b.total() << " counts, seed " << cfg.acquisition.seed << ") to " << cfg.output_dir << '\n';
	return 0;
}

int cmd_reconstruct(const CommonOptions& o, const std::string& algo, const std::string& sinogram_path,
                    const std::string& reference_path)
{
	const ExperimentConfig cfg = resolve(o);
	const Problem problem = build_problem(cfg);
	const Sinogram b = sinogram_path.empty() ? measure(problem, cfg, cfg.acquisition.seed)
	                                         : io::read_sinogram_csv(sinogram_path);
	std::optional<ImageGrid> reference;
	if (!reference_path.empty())
		reference = io::read_image_csv(reference_path, cfg.grid.extent);

	const AlgorithmId id = parse_algorithm(algo);
	const SuperiorizerConfig sc = cfg.algorithm_config(id, uniform_level(problem.matrix, b));
	const ImageGrid x0 = initial_image(cfg, problem.matrix, b, cfg.initial);
	EmWorkspace w(problem.matrix, b);
	Trajectory t = id.classic ? classic_trajectory(w, x0, cfg.em_iterations) : run_superiorized(w, x0, sc);
	annotate(t, sc.wavelet, reference ? &*reference : nullptr);

	std::size_t pick = t.rows.size() - 1;
	if (reference)
		for (std::size_t k = 0; k < t.rows.size(); ++k)
			if (t.rows[k].mse < t.rows[pick].mse)
				pick = k;

	fs::create_directories(cfg.output_dir);
	write_trajectory_csv(cfg.output_dir / (algo + ".csv"), t);
	io::write_image_csv(cfg.output_dir / (algo + ".image.csv"), t.iterates[pick]);
	io::write_image_pgm(cfg.output_dir / (algo + ".image.pgm"), t.iterates[pick]);
	const auto& row = t.rows[pick];
	std::cout << algo << ": iteration " << row.k << " kl " << row.kl << " tv " << row.tv << " l1 " << row.l1;
	if (reference)
		std::cout << " rmse " << rmse(t.iterates[pick], *reference);
	std::cout << '\n';
	return 0;
}

int cmd_experiment(const CommonOptions& o, int jobs)
{
	ExperimentConfig cfg = resolve(o);
	if (jobs > 0)
		cfg.jobs = jobs;
	const ExperimentResult r = run_experiment(cfg);
	std::vector<SummaryRow> rows{r.reference_row};
	for (const auto& run : r.runs)
		rows.push_back(run.summary);
	std::cout << cfg.name << " seed " << r.seed << " config " << r.config_hash << '\n' << render_summary(rows);
	std::cout << "results in " << r.directory << '\n';
	return 0;
}

int cmd_report(const std::string& dir)
{
	std::cout << render_summary(summarize_directory(dir));
	return 0;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Superiorized EM reconstruction for attenuated emission tomography"};
	app.require_subcommand(1);

	CommonOptions phantom_opts, simulate_opts, recon_opts, exp_opts;
	auto* phantom = app.add_subcommand("phantom", "Write the activity and attenuation images");
	add_common(phantom, phantom_opts, false);

	auto* simulate = app.add_subcommand("simulate", "Write the noise-free and noisy sinograms");
	add_common(simulate, simulate_opts, true);

	auto* reconstruct = app.add_subcommand("reconstruct", "Run one algorithm");
	add_common(reconstruct, recon_opts, true);
	std::string algo = "em", sinogram_path, reference_path;
	reconstruct->add_option("--algo", algo, "em or <tv|hard|soft>_alg<1|2>[_nophi]");
	reconstruct->add_option("--sinogram", sinogram_path, "Measured sinogram CSV (default: simulate)")
		->check(CLI::ExistingFile);
	reconstruct->add_option("--reference", reference_path, "Reference image CSV; selects the best-MSE iterate")
		->check(CLI::ExistingFile);

	auto* experiment = app.add_subcommand("experiment", "Run the full protocol of one experiment");
	add_common(experiment, exp_opts, true);
	int jobs = 0;
	experiment->add_option("--jobs", jobs, "Worker threads (0 = config value)");

	auto* report = app.add_subcommand("report", "Re-render the summary table of a result directory");
	std::string report_dir;
	report->add_option("--out,dir", report_dir, "Result directory (experiment output for one seed)")
		->required()
		->check(CLI::ExistingDirectory);

	CLI11_PARSE(app, argc, argv);
	try
	{
		if (*phantom)
			return cmd_phantom(phantom_opts);
		if (*simulate)
			return cmd_simulate(simulate_opts);
		if (*reconstruct)
			return cmd_reconstruct(recon_opts, algo, sinogram_path, reference_path);
		if (*experiment)
			return cmd_experiment(exp_opts, jobs);
		if (*report)
			return cmd_report(report_dir);
	}
	catch (const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
		return 1;
	}
	return 0;
}
