#include "trdecomp/text_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

#include "trdecomp/errors.hpp"

namespace trdecomp {

namespace {

std::string next_token(std::istream& in, const char* what) {
  std::string token;
  if (!(in >> token)) throw IoError(std::string("unexpected end of input while reading ") + what);
  return token;
}

std::size_t read_count(std::istream& in, const char* what) {
  const std::string token = next_token(in, what);
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw IoError("malformed " + std::string(what) + ": '" + token + "'");
  }
  return value;
}

double read_value(std::istream& in) {
  const std::string token = next_token(in, "tensor value");
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw IoError("malformed tensor value: '" + token + "'");
  }
  return value;
}

Shape read_shape(std::istream& in, std::size_t d, const char* what) {
  Shape s(d);
  for (auto& v : s) v = read_count(in, what);
  return s;
}

void write_shape(std::ostream& out, const Shape& s) {
  for (std::size_t k = 0; k < s.size(); ++k) out << (k ? " " : "") << s[k];
  out << '\n';
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

void write_tensor(std::ostream& out, const DenseTensor& tensor) {
  out << tensor.order() << '\n';
  write_shape(out, tensor.dims());
  for (double v : tensor.values()) out << format_double(v) << '\n';
}

DenseTensor read_tensor(std::istream& in) {
  const std::size_t d = read_count(in, "tensor order");
  if (d == 0) throw IoError("tensor order must be at least 1");
  Shape dims = read_shape(in, d, "tensor dimension");
  for (std::size_t n : dims) {
    if (n == 0) throw IoError("tensor dimensions must be positive");
  }
  std::vector<double> values(shape_size(dims));
  for (double& v : values) v = read_value(in);
  return DenseTensor(std::move(dims), std::move(values));
}

void write_cores(std::ostream& out, const TRCores& cores) {
  out << cores.order() << '\n';
  write_shape(out, cores.ranks());
  write_shape(out, cores.dims());
  for (const auto& c : cores.cores()) write_tensor(out, c);
}

TRCores read_cores(std::istream& in) {
  const std::size_t d = read_count(in, "ring order");
  const Shape ranks = read_shape(in, d, "ring rank");
  const Shape dims = read_shape(in, d, "ring dimension");
  std::vector<DenseTensor> cores;
  for (std::size_t k = 0; k < d; ++k) {
    DenseTensor c = read_tensor(in);
    const Shape expected{ranks[k], dims[k], ranks[(k + 1) % d]};
    if (c.dims() != expected) {
      throw IoError("core " + std::to_string(k + 1) + " does not match the ring header");
    }
    cores.push_back(std::move(c));
  }
  try {
    return TRCores(std::move(cores));
  } catch (const DomainError& e) {
    throw IoError(std::string("invalid tensor ring: ") + e.what());
  }
}

void save_tensor(const std::filesystem::path& path, const DenseTensor& tensor) {
  auto out = open_out(path);
  write_tensor(out, tensor);
  finish(out, path);
}

DenseTensor load_tensor(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_tensor(in);
}

void save_cores(const std::filesystem::path& path, const TRCores& cores) {
  auto out = open_out(path);
  write_cores(out, cores);
  finish(out, path);
}

TRCores load_cores(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_cores(in);
}

}  // namespace trdecomp
