#include "sigmalab/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

#include "sigmalab/error.hpp"

namespace sigmalab {

namespace {

constexpr std::string_view kJsonSuffix = ".fld.json";

std::filesystem::path with_suffix(const std::filesystem::path& stem, std::string_view suffix) {
  return std::filesystem::path(stem.string() + std::string(suffix));
}

}  // namespace

std::filesystem::path field_stem(const std::filesystem::path& path) {
  const std::string s = path.string();
  for (std::string_view suffix : {std::string_view(".fld.json"), std::string_view(".fld.bin")}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      return std::filesystem::path(s.substr(0, s.size() - suffix.size()));
    }
  }
  return path;
}

void write_field(const ScalarField& field, const std::filesystem::path& path) {
  const auto stem = field_stem(path);
  const Grid& grid = field.grid();
  nlohmann::json meta;
  meta["dim"] = grid.dim();
  meta["bounds"] = nlohmann::json::array();
  meta["resolution"] = nlohmann::json::array();
  for (int k = 0; k < grid.dim(); ++k) {
    meta["bounds"].push_back({grid.bounds(k).lo, grid.bounds(k).hi});
    meta["resolution"].push_back(grid.nodes(k));
  }
  meta["byte_order"] = "little";
  meta["dtype"] = "float64";
  meta["payload"] = stem.filename().string() + ".fld.bin";

  std::ofstream js(with_suffix(stem, kJsonSuffix));
  if (!js) throw Error(ErrorKind::Io, "cannot open " + with_suffix(stem, kJsonSuffix).string());
  js << meta.dump(2) << '\n';

  std::ofstream bin(with_suffix(stem, ".fld.bin"), std::ios::binary);
  if (!bin) throw Error(ErrorKind::Io, "cannot open " + with_suffix(stem, ".fld.bin").string());
  for (double v : field.values()) {
    auto bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((bits >> (8 * b)) & 0xffu);
    bin.write(reinterpret_cast<const char*>(bytes), 8);
  }
  if (!bin) throw Error(ErrorKind::Io, "failed writing field payload");
}

ScalarField read_field(const std::filesystem::path& path) {
  const auto stem = field_stem(path);
  std::ifstream js(with_suffix(stem, kJsonSuffix));
  if (!js) throw Error(ErrorKind::Io, "cannot open " + with_suffix(stem, kJsonSuffix).string());
  nlohmann::json meta;
  try {
    js >> meta;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Io, std::string("malformed field metadata: ") + e.what());
  }
  if (meta.value("byte_order", "little") != "little" || meta.value("dtype", "float64") != "float64") {
    throw Error(ErrorKind::Io, "only little-endian float64 payloads are supported");
  }
  const int dim = meta.at("dim").get<int>();
  std::array<Interval, kMaxDim> bounds{};
  std::array<int, kMaxDim> res{1, 1, 1};
  if (dim < 2 || dim > kMaxDim || meta.at("bounds").size() != static_cast<std::size_t>(dim) ||
      meta.at("resolution").size() != static_cast<std::size_t>(dim)) {
    throw Error(ErrorKind::Io, "field metadata has inconsistent dimension");
  }
  for (int k = 0; k < dim; ++k) {
    bounds[k] = {meta["bounds"][k][0].get<double>(), meta["bounds"][k][1].get<double>()};
    res[k] = meta["resolution"][k].get<int>();
  }
  Grid grid(dim, bounds, res);

  std::ifstream bin(with_suffix(stem, ".fld.bin"), std::ios::binary);
  if (!bin) throw Error(ErrorKind::Io, "cannot open " + with_suffix(stem, ".fld.bin").string());
  std::vector<double> values(grid.size());
  for (double& v : values) {
    unsigned char bytes[8];
    if (!bin.read(reinterpret_cast<char*>(bytes), 8)) throw Error(ErrorKind::Io, "truncated field payload");
    std::uint64_t bits = 0;
    for (int b = 0; b < 8; ++b) bits |= std::uint64_t(bytes[b]) << (8 * b);
    v = std::bit_cast<double>(bits);
  }
  if (bin.peek() != std::char_traits<char>::eof()) throw Error(ErrorKind::Io, "field payload has trailing bytes");
  ScalarField field(grid, std::move(values));
  if (!field.all_finite()) throw Error(ErrorKind::Io, "field payload contains non-finite values");
  return field;
}

}  // namespace sigmalab
