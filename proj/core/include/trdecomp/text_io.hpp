#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "trdecomp/dense_tensor.hpp"
#include "trdecomp/tr_cores.hpp"

namespace trdecomp {

/// Shortest text of 17 significant digits ("%.17g"), locale independent.
[[nodiscard]] std::string format_double(double value);

// Tensor text format:
//   line 1: d
//   line 2: n_1 ... n_d
//   then one value per line in storage order, 17 significant digits.
void write_tensor(std::ostream& out, const DenseTensor& tensor);
[[nodiscard]] DenseTensor read_tensor(std::istream& in);

// Tensor-ring text format:
//   line 1: d
//   line 2: r_1 ... r_d
//   line 3: n_1 ... n_d
//   then the d cores, each in the tensor text format.
void write_cores(std::ostream& out, const TRCores& cores);
[[nodiscard]] TRCores read_cores(std::istream& in);

// File wrappers. Open/read/write failures and malformed content throw IoError.
void save_tensor(const std::filesystem::path& path, const DenseTensor& tensor);
[[nodiscard]] DenseTensor load_tensor(const std::filesystem::path& path);
void save_cores(const std::filesystem::path& path, const TRCores& cores);
[[nodiscard]] TRCores load_cores(const std::filesystem::path& path);

}  // namespace trdecomp
