#include "superem/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <vector>

namespace superem::io {

namespace {

static_assert(std::endian::native == std::endian::little, "matrix cache assumes a little-endian host");

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
	std::ofstream out(path, mode);
	if (!out)
		throw std::runtime_error("cannot open " + path.string() + " for writing");
	return out;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in)
{
	std::ifstream in(path, mode);
	if (!in)
		throw std::runtime_error("cannot open " + path.string());
	return in;
}

std::vector<double> parse_row(const std::string& line, const std::filesystem::path& path)
{
	std::vector<double> row;
	std::stringstream ss(line);
	std::string cell;
	while (std::getline(ss, cell, ','))
	{
		cell.erase(0, cell.find_first_not_of(" \t\r"));
		cell.erase(cell.find_last_not_of(" \t\r") + 1);
		if (cell.empty())
			continue;
		double v = 0.0;
		auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
		if (ec != std::errc() || ptr != cell.data() + cell.size())
			throw FormatError(path.string() + ": bad number '" + cell + "'");
		row.push_back(v);
	}
	return row;
}

void write_row(std::ostream& out, const double* v, Index n)
{
	for (Index k = 0; k < n; ++k)
	{
		if (k)
			out << ',';
		out << v[k];
	}
	out << '\n';
}

}  // namespace

void write_image_csv(const std::filesystem::path& path, const ImageGrid& image)
{
	auto out = open_out(path);
	out << std::setprecision(17);
	for (int r = 0; r < image.height; ++r)
		write_row(out, image.pixels.data() + Index(r) * image.width, image.width);
}

ImageGrid read_image_csv(const std::filesystem::path& path, double extent)
{
	auto in = open_in(path);
	std::vector<double> values;
	int width = -1;
	int height = 0;
	std::string line;
	while (std::getline(in, line))
	{
		auto row = parse_row(line, path);
		if (row.empty())
			continue;
		if (width < 0)
			width = int(row.size());
		else if (int(row.size()) != width)
			throw FormatError(path.string() + ": ragged image rows");
		values.insert(values.end(), row.begin(), row.end());
		++height;
	}
	if (width <= 0)
		throw FormatError(path.string() + ": empty image");
	return ImageGrid(width, height, extent, Eigen::Map<Eigen::VectorXd>(values.data(), Index(values.size())));
}

void write_image_pgm(const std::filesystem::path& path, const ImageGrid& image)
{
	auto out = open_out(path, std::ios::out | std::ios::binary);
	out << "P5\n" << image.width << ' ' << image.height << "\n65535\n";
	const double peak = image.pixels.maxCoeff();
	const double scale = peak > 0.0 ? 65535.0 / peak : 0.0;
	for (Index j = 0; j < image.size(); ++j)
	{
		const double v = std::clamp(image.pixels[j] * scale, 0.0, 65535.0);
		const auto q = static_cast<std::uint16_t>(std::lround(v));
		const char be[2] = {char(q >> 8), char(q & 0xff)};
		out.write(be, 2);
	}
}

void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sinogram)
{
	auto out = open_out(path);
	out << "views=" << sinogram.num_views() << " bins=" << sinogram.num_bins() << '\n';
	out << std::setprecision(17);
	write_row(out, sinogram.shape.angles.data(), Index(sinogram.shape.angles.size()));
	for (int v = 0; v < sinogram.num_views(); ++v)
		write_row(out, sinogram.values.data() + Index(v) * sinogram.num_bins(), sinogram.num_bins());
}

Sinogram read_sinogram_csv(const std::filesystem::path& path)
{
	auto in = open_in(path);
	std::string header;
	std::getline(in, header);
	int views = 0;
	int bins = 0;
	if (std::sscanf(header.c_str(), "views=%d bins=%d", &views, &bins) != 2 || views <= 0 || bins <= 0)
		throw FormatError(path.string() + ": expected 'views=V bins=B' header");

	std::string line;
	std::getline(in, line);
	SinogramShape shape{views, bins, parse_row(line, path)};
	if (int(shape.angles.size()) != views)
		throw FormatError(path.string() + ": angle list has wrong length");

	Eigen::VectorXd values(shape.size());
	for (int v = 0; v < views; ++v)
	{
		if (!std::getline(in, line))
			throw FormatError(path.string() + ": missing view rows");
		auto row = parse_row(line, path);
		if (int(row.size()) != bins)
			throw FormatError(path.string() + ": view row has wrong length");
		std::copy(row.begin(), row.end(), values.data() + Index(v) * bins);
	}
	return Sinogram(std::move(shape), std::move(values));
}

void write_matrix_cache(const std::filesystem::path& path, const SystemMatrix& a)
{
	auto out = open_out(path, std::ios::out | std::ios::binary);
	const auto& m = a.matrix();
	const std::uint64_t header[3] = {std::uint64_t(m.rows()), std::uint64_t(m.cols()), std::uint64_t(m.nonZeros())};
	out.write(reinterpret_cast<const char*>(header), sizeof header);
	out.write(reinterpret_cast<const char*>(m.outerIndexPtr()), std::streamsize((m.rows() + 1) * sizeof(std::int64_t)));
	out.write(reinterpret_cast<const char*>(m.innerIndexPtr()), std::streamsize(m.nonZeros() * sizeof(std::int64_t)));
	out.write(reinterpret_cast<const char*>(m.valuePtr()), std::streamsize(m.nonZeros() * sizeof(double)));
	if (!out)
		throw std::runtime_error("failed writing " + path.string());
}

SystemMatrix read_matrix_cache(const std::filesystem::path& path, SinogramShape shape)
{
	auto in = open_in(path, std::ios::in | std::ios::binary);
	std::uint64_t header[3];
	if (!in.read(reinterpret_cast<char*>(header), sizeof header))
		throw FormatError(path.string() + ": truncated header");
	const auto rows = Index(header[0]);
	const auto cols = Index(header[1]);
	const auto nnz = Index(header[2]);

	std::vector<std::int64_t> row_ptr(std::size_t(rows) + 1);
	std::vector<std::int64_t> col(static_cast<std::size_t>(nnz));
	std::vector<double> val(static_cast<std::size_t>(nnz));
	in.read(reinterpret_cast<char*>(row_ptr.data()), std::streamsize(row_ptr.size() * sizeof(std::int64_t)));
	in.read(reinterpret_cast<char*>(col.data()), std::streamsize(col.size() * sizeof(std::int64_t)));
	in.read(reinterpret_cast<char*>(val.data()), std::streamsize(val.size() * sizeof(double)));
	if (!in)
		throw FormatError(path.string() + ": truncated matrix body");
	if (row_ptr.front() != 0 || row_ptr.back() != nnz)
		throw FormatError(path.string() + ": inconsistent row pointers");

	std::vector<SystemMatrix::Triplet> entries;
	entries.reserve(val.size());
	for (Index i = 0; i < rows; ++i)
		for (auto k = row_ptr[std::size_t(i)]; k < row_ptr[std::size_t(i) + 1]; ++k)
		{
			if (col[std::size_t(k)] < 0 || col[std::size_t(k)] >= cols)
				throw FormatError(path.string() + ": column index out of range");
			entries.emplace_back(i, col[std::size_t(k)], val[std::size_t(k)]);
		}
	return SystemMatrix::from_triplets(rows, cols, entries, std::move(shape));
}

ContentHash& ContentHash::bytes(const void* data, std::size_t n)
{
	const auto* p = static_cast<const unsigned char*>(data);
	for (std::size_t k = 0; k < n; ++k)
	{
		h_ ^= p[k];
		h_ *= 0x100000001b3ULL;
	}
	return *this;
}

std::string ContentHash::hex() const
{
	std::ostringstream os;
	os << std::hex << std::setw(16) << std::setfill('0') << h_;
	return os.str();
}

}  // namespace superem::io
