#pragma once

#include "superem/image.hpp"
#include "superem/sinogram.hpp"
#include "superem/system_matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

namespace superem::io {

class FormatError : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

// Images: `height` lines of `width` comma-separated values, row-major.
void write_image_csv(const std::filesystem::path& path, const ImageGrid& image);
ImageGrid read_image_csv(const std::filesystem::path& path, double extent);

/// 16-bit binary PGM scaled so the image maximum maps to 65535. Lossy; for viewing only.
void write_image_pgm(const std::filesystem::path& path, const ImageGrid& image);

// Sinograms: "views=V bins=B", then the comma-separated angle list, then
// one line of B values per view.
void write_sinogram_csv(const std::filesystem::path& path, const Sinogram& sinogram);
Sinogram read_sinogram_csv(const std::filesystem::path& path);

/// Binary matrix cache, little-endian 64-bit throughout:
///   u64 M, u64 N, u64 nnz, i64 row_ptr[M+1], i64 col[nnz], f64 value[nnz].
/// The sinogram shape is not stored; callers supply it on load.
void write_matrix_cache(const std::filesystem::path& path, const SystemMatrix& a);
SystemMatrix read_matrix_cache(const std::filesystem::path& path, SinogramShape shape);

/// FNV-1a over raw bytes; used to key matrix caches and manifests.
class ContentHash
{
public:
	ContentHash& bytes(const void* data, std::size_t n);
	template <typename T>
	ContentHash& value(const T& v)
	{
		return bytes(&v, sizeof(T));
	}
	ContentHash& text(const std::string& s) { return bytes(s.data(), s.size()); }
	std::uint64_t digest() const { return h_; }
	std::string hex() const;

private:
	std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace superem::io
