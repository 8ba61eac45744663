#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>

#include "hecke/cyclotomic.hpp"

namespace hecke {

struct TraceKey {
  int k;
  std::int64_t N;
  std::string char_hash;
  std::int64_t n;
  friend auto operator<=>(const TraceKey &, const TraceKey &) = default;
};

/// Append-only text cache of exact traces.
///
/// File layout: a header line `HECKE-TRACE-CACHE v1`, then one record per line
///   k N charhash n : r c_0/d_0 ... c_{r-1}/d_{r-1} ; crc
/// where crc is the FNV-1a-32 checksum (8 hex digits) of everything before
/// " ; ". A wrong header disables the file's contents; a record that fails to
/// parse or whose checksum mismatches is skipped and recomputed by the caller.
class TraceCache {
public:
  static constexpr const char *kHeader = "HECKE-TRACE-CACHE v1";
  static constexpr const char *kFileName = "traces.v1";

  explicit TraceCache(std::filesystem::path file) : path_(std::move(file)) { load(); }

  /// HECKE_CACHE_DIR if set, else $XDG_CACHE_HOME/hecke, else ~/.cache/hecke.
  static std::filesystem::path default_directory() {
    if (const char *dir = std::getenv("HECKE_CACHE_DIR"); dir && *dir)
      return dir;
    if (const char *xdg = std::getenv("XDG_CACHE_HOME"); xdg && *xdg)
      return std::filesystem::path(xdg) / "hecke";
    if (const char *home = std::getenv("HOME"); home && *home)
      return std::filesystem::path(home) / ".cache" / "hecke";
    return std::filesystem::temp_directory_path() / "hecke-cache";
  }

  static TraceCache open_default() { return TraceCache(default_directory() / kFileName); }

  const std::filesystem::path &path() const { return path_; }
  std::size_t size() const {
    std::lock_guard guard(mutex_);
    return records_.size();
  }
  std::size_t rejected_records() const { return rejected_; }
  bool header_valid() const { return header_valid_; }

  std::optional<CyclotomicRational> lookup(const TraceKey &key) const {
    std::lock_guard guard(mutex_);
    if (auto it = records_.find(key); it != records_.end())
      return it->second;
    return std::nullopt;
  }

  void store(const TraceKey &key, const CyclotomicRational &value) {
    std::lock_guard guard(mutex_);
    if (records_.count(key))
      return;
    records_.emplace(key, value);
    std::error_code ec;
    std::filesystem::create_directories(path_.parent_path(), ec);
    if (!header_valid_) {
      // Start a fresh file; the old one had a foreign or missing header.
      std::ofstream out(path_, std::ios::trunc);
      out << kHeader << '\n';
      header_valid_ = static_cast<bool>(out);
      needs_newline_ = false;
      if (!header_valid_)
        return;
    }
    std::ofstream out(path_, std::ios::app);
    if (needs_newline_) {
      out << '\n';
      needs_newline_ = false;
    }
    out << format_record(key, value) << '\n';
  }

  static std::string format_record(const TraceKey &key, const CyclotomicRational &value) {
    std::ostringstream body;
    body << key.k << ' ' << key.N << ' ' << key.char_hash << ' ' << key.n << " : "
         << value.serialize();
    const std::string text = body.str();
    std::ostringstream line;
    line << text << " ; " << std::hex << std::setw(8) << std::setfill('0') << checksum(text);
    return line.str();
  }

  /// Parses one record line; nullopt on any syntax or checksum failure.
  static std::optional<std::pair<TraceKey, CyclotomicRational>> parse_record(const std::string &line) {
    const auto sep = line.rfind(" ; ");
    if (sep == std::string::npos)
      return std::nullopt;
    const std::string text = line.substr(0, sep);
    std::uint32_t stored = 0;
    try {
      std::size_t used = 0;
      const std::string crc = line.substr(sep + 3);
      stored = static_cast<std::uint32_t>(std::stoul(crc, &used, 16));
      if (used != crc.size() || crc.size() != 8)
        return std::nullopt;
    } catch (const std::exception &) {
      return std::nullopt;
    }
    if (stored != checksum(text))
      return std::nullopt;
    std::istringstream in(text);
    TraceKey key;
    std::string colon;
    int r = 0;
    if (!(in >> key.k >> key.N >> key.char_hash >> key.n >> colon >> r) || colon != ":" || r < 1)
      return std::nullopt;
    std::vector<Rational> coeffs(r);
    for (int i = 0; i < r; ++i) {
      std::string q;
      if (!(in >> q))
        return std::nullopt;
      if (coeffs[i].set_str(q, 10) != 0 || coeffs[i].get_den() == 0)
        return std::nullopt;
      coeffs[i].canonicalize();
    }
    std::string extra;
    if (in >> extra)
      return std::nullopt;
    return std::make_pair(key, CyclotomicRational(r, std::move(coeffs)));
  }

  static std::uint32_t checksum(const std::string &text) {
    std::uint32_t h = 2166136261u;
    for (unsigned char ch : text) {
      h ^= ch;
      h *= 16777619u;
    }
    return h;
  }

private:
  void load() {
    std::ifstream in(path_, std::ios::binary);
    if (!in)
      return;
    in.seekg(0, std::ios::end);
    if (in.tellg() > 0) {
      in.seekg(-1, std::ios::end);
      needs_newline_ = in.get() != '\n';
    }
    in.seekg(0);
    std::string line;
    if (!std::getline(in, line) || line != kHeader)
      return;
    header_valid_ = true;
    while (std::getline(in, line)) {
      if (line.empty())
        continue;
      if (auto rec = parse_record(line))
        records_.emplace(std::move(rec->first), std::move(rec->second));
      else
        ++rejected_;
    }
  }

  std::filesystem::path path_;
  mutable std::mutex mutex_;
  std::map<TraceKey, CyclotomicRational> records_;
  bool header_valid_ = false;
  bool needs_newline_ = false;
  std::size_t rejected_ = 0;
};

} // namespace hecke
