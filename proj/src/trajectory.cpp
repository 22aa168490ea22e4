#include "superem/trajectory.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace superem {

Trajectory classic_trajectory(EmWorkspace& w, const ImageGrid& x0, int iters)
{
	Trajectory t;
	auto run = run_classic_em(w, x0, iters);
	for (std::size_t k = 0; k < run.size(); ++k)
	{
		TrajectoryRow row;
		row.k = int(k);
		row.kl = run[k].kl;
		row.accepted_variant = k == 0 ? "initial" : "em";
		t.rows.push_back(row);
		t.iterates.push_back(std::move(run[k].x));
	}
	return t;
}

namespace {

void cell(std::ostream& out, double v)
{
	if (std::isfinite(v))
		out << v;
}

double parse_cell(const std::string& s)
{
	if (s.empty())
		return kNotAvailable;
	std::size_t used = 0;
	const double v = std::stod(s, &used);
	if (used != s.size())
		throw std::runtime_error("trajectory csv: bad number '" + s + "'");
	return v;
}

}  // namespace

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& t)
{
	std::ofstream out(path);
	if (!out)
		throw std::runtime_error("cannot open " + path.string() + " for writing");
	out << "k,kl,tv,l1,mse,beta,inner_tries,condition_lhs,condition_rhs,accepted_variant\n";
	out << std::setprecision(17);
	for (const auto& r : t.rows)
	{
		out << r.k << ',';
		cell(out, r.kl);
		out << ',';
		cell(out, r.tv);
		out << ',';
		cell(out, r.l1);
		out << ',';
		cell(out, r.mse);
		out << ',' << r.beta << ',' << r.inner_tries << ',';
		cell(out, r.condition_lhs);
		out << ',';
		cell(out, r.condition_rhs);
		out << ',' << r.accepted_variant << '\n';
	}
}

std::vector<TrajectoryRow> read_trajectory_csv(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if (!in)
		throw std::runtime_error("cannot open " + path.string());
	std::string line;
	std::getline(in, line);
	if (line.rfind("k,kl,", 0) != 0)
		throw std::runtime_error(path.string() + ": not a trajectory csv");
	std::vector<TrajectoryRow> rows;
	while (std::getline(in, line))
	{
		if (line.empty())
			continue;
		std::vector<std::string> cells;
		std::stringstream ss(line);
		std::string c;
		while (std::getline(ss, c, ','))
			cells.push_back(c);
		if (line.back() == ',')
			cells.emplace_back();
		if (cells.size() != 10)
			throw std::runtime_error(path.string() + ": expected 10 columns");
		TrajectoryRow r;
		r.k = std::stoi(cells[0]);
		r.kl = parse_cell(cells[1]);
		r.tv = parse_cell(cells[2]);
		r.l1 = parse_cell(cells[3]);
		r.mse = parse_cell(cells[4]);
		r.beta = parse_cell(cells[5]);
		r.inner_tries = std::stoi(cells[6]);
		r.condition_lhs = parse_cell(cells[7]);
		r.condition_rhs = parse_cell(cells[8]);
		r.accepted_variant = cells[9];
		rows.push_back(std::move(r));
	}
	return rows;
}

}  // namespace superem
