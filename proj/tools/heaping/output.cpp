#include "heaping/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "heaping/errors.hpp"

namespace heaping::cli {

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t state) {
  for (unsigned char c : bytes) {
    state ^= c;
    state *= 0x100000001b3ULL;
  }
  return state;
}

std::string hex64(std::uint64_t value) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, value >>= 4) out[static_cast<std::size_t>(i)] = kDigits[value & 0xf];
  return out;
}

std::string num(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string num(std::int64_t value) {
  std::array<char, 24> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

std::string num(std::uint64_t value) {
  std::array<char, 24> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

InputFile describe_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::uint64_t bytes = 0;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    const auto got = static_cast<std::size_t>(in.gcount());
    h = fnv1a64(std::string_view(buf.data(), got), h);
    bytes += got;
  }
  return {path.filename().string(), bytes, hex64(h)};
}

RunInfo::RunInfo(std::string subcommand, nlohmann::json config, std::vector<InputFile> inputs, std::uint64_t seed)
    : subcommand_(std::move(subcommand)), config_(std::move(config)), inputs_(std::move(inputs)), seed_(seed) {
  std::string canonical = subcommand_ + '\n' + config_.dump() + '\n';
  for (const auto& in : inputs_) canonical += in.name + ' ' + in.fnv1a64 + '\n';
  hash_ = hex64(fnv1a64(canonical));
}

nlohmann::json RunInfo::to_json() const {
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& in : inputs_) inputs.push_back({{"name", in.name}, {"bytes", in.bytes}, {"fnv1a64", in.fnv1a64}});
  return {{"subcommand", subcommand_},
          {"config", config_},
          {"inputs", inputs},
          {"seed", seed_},
          {"config_hash", hash_}};
}

std::string RunInfo::csv_comment() const {
  return "# run: subcommand=" + subcommand_ + " config_hash=" + hash_ + " seed=" + num(seed_) +
         " config=" + config_.dump() + "\n";
}

std::string RunInfo::xml_comment() const {
  std::string body = to_json().dump();
  // "--" may not appear inside an XML comment.
  for (std::size_t pos = body.find("--"); pos != std::string::npos; pos = body.find("--", pos)) {
    body.replace(pos, 2, "- -");
  }
  return "<!-- run: " + body + " -->\n";
}

Csv& Csv::cell(std::string_view value) {
  if (!fresh_) text_ += ',';
  fresh_ = false;
  if (value.find_first_of(",\"\n") != std::string_view::npos) {
    text_ += '"';
    for (char c : value) {
      if (c == '"') text_ += '"';
      text_ += c;
    }
    text_ += '"';
  } else {
    text_ += value;
  }
  return *this;
}

void Csv::end() {
  text_ += '\n';
  fresh_ = true;
}

void Csv::header(std::initializer_list<std::string_view> names) {
  for (auto n : names) cell(n);
  end();
}

OutputSet::OutputSet(std::filesystem::path directory) : directory_(std::move(directory)) {
  std::error_code ec;
  std::filesystem::create_directories(directory_, ec);
  if (ec) throw IoError("cannot create output directory " + directory_.string() + ": " + ec.message());
}

OutputSet::~OutputSet() {
  if (committed_) return;
  for (const auto& n : names_) {
    std::error_code ec;
    std::filesystem::remove(directory_ / n, ec);
  }
}

void OutputSet::write(const std::string& name, std::string_view content) {
  const auto path = directory_ / name;
  names_.push_back(name);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw IoError("write error on " + path.string());
}

std::string file_token(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '_' || c == '.';
    out += keep ? c : '_';
  }
  return out.empty() ? "unnamed" : out;
}

}  // namespace heaping::cli
