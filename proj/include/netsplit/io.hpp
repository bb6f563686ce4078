#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "netsplit/community.hpp"
#include "netsplit/network.hpp"
#include "netsplit/result.hpp"

namespace netsplit {

namespace detail {

/// Shortest round-trip formatting; all emitted numbers go through here so
/// outputs are byte-stable across runs and thread counts.
inline std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline bool parse_double(const std::string& tok, double& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline bool parse_int(const std::string& tok, long& out) {
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  auto res = std::from_chars(first, last, out);
  return res.ec == std::errc{} && res.ptr == last;
}

inline std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

inline bool is_comment_or_blank(const std::string& line) {
  for (char ch : line) {
    if (ch == ' ' || ch == '\t' || ch == '\r') continue;
    return ch == '#';
  }
  return true;
}

struct EdgeRecord {
  long i, j;
  double w;
  long line;
};

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open '" + path + "' for writing");
  return out;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open '" + path + "' for reading");
  return in;
}

}  // namespace detail

/// Parses a `i j [weight]` edge list (1-based ids, tab/comma/space separated,
/// `#` comments ignored, missing weight = 1). Dyads not referenced stay 0.
/// With n_hint = 0 the node count is taken from a `# ... n=N` header comment
/// if present, else from the largest id seen.
inline Network read_edge_list(const std::string& path, int n_hint, NetworkKind kind,
                              EdgeDomain domain) {
  auto in = detail::open_in(path);
  std::string line;
  long lineno = 0;
  long header_n = 0;
  std::vector<detail::EdgeRecord> records;
  long max_id = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_comment_or_blank(line)) {
      // only our own writer header carries an authoritative node count
      if (line.find("netsplit-edges") != std::string::npos) {
        const auto pos = line.find("n=");
        if (pos != std::string::npos) {
          const auto fields = detail::split_fields(line.substr(pos + 2));
          long v = 0;
          if (!fields.empty() && detail::parse_int(fields[0], v) && v > 0) header_n = v;
        }
      }
      continue;
    }
    const auto fields = detail::split_fields(line);
    if (fields.size() != 2 && fields.size() != 3)
      throw data_error(path + ": malformed line " + std::to_string(lineno) +
                       " (expected 'i j [weight]')");
    long i = 0, j = 0;
    double w = 1.0;
    if (!detail::parse_int(fields[0], i) || !detail::parse_int(fields[1], j) ||
        (fields.size() == 3 && !detail::parse_double(fields[2], w)))
      throw data_error(path + ": malformed line " + std::to_string(lineno));
    if (i < 1 || j < 1)
      throw data_error(path + ": node id out of range at line " + std::to_string(lineno));
    if (i == j && !kind.loops())
      throw data_error(path + ": self-loop at line " + std::to_string(lineno));
    max_id = std::max(max_id, std::max(i, j));
    records.push_back({i, j, w, lineno});
  }
  long n = n_hint > 0 ? n_hint : (header_n > 0 ? header_n : max_id);
  if (n < 1) throw data_error(path + ": empty edge list and no node count given");
  if (max_id > n)
    throw data_error(path + ": node id " + std::to_string(max_id) + " out of range for n=" +
                     std::to_string(n));

  Network net(static_cast<int>(n), kind, domain);
  std::vector<char> seen(static_cast<std::size_t>(n) * n, 0);
  for (const auto& r : records) {
    auto [a, b] = kind.canonical(static_cast<int>(r.i) - 1, static_cast<int>(r.j) - 1);
    char& flag = seen[static_cast<std::size_t>(a) * n + b];
    if (flag)
      throw data_error(path + ": duplicate dyad at line " + std::to_string(r.line));
    flag = 1;
    try {
      net.set(a, b, r.w);
    } catch (const std::exception& e) {
      throw data_error(path + ": line " + std::to_string(r.line) + ": " + e.what());
    }
  }
  return net;
}

inline void write_edge_list(const Network& net, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# netsplit-edges n=" << net.n() << " kind=" << to_string(net.kind())
      << " domain=" << to_string(net.domain()) << "\n";
  net.for_each([&](std::int64_t, int i, int j, double v) {
    if (v == 0.0) return;
    out << (i + 1) << '\t' << (j + 1) << '\t' << detail::format_double(v) << '\n';
  });
  if (!out) throw data_error("write failed: " + path);
}

/// Dense n x n matrix, one row per line. For undirected kinds each lower
/// entry must equal its mirror or be zero; no-loop kinds need a zero
/// diagonal. Values are mirrored into storage on read.
inline Network read_dense_csv(const std::string& path, NetworkKind kind, EdgeDomain domain) {
  auto in = detail::open_in(path);
  std::string line;
  std::vector<std::vector<double>> rows;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_comment_or_blank(line)) continue;
    const auto fields = detail::split_fields(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) {
      double v = 0.0;
      if (!detail::parse_double(f, v))
        throw data_error(path + ": malformed value '" + f + "' at line " +
                         std::to_string(lineno));
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  const auto n = static_cast<long>(rows.size());
  if (n < 1) throw data_error(path + ": no data rows");
  for (long i = 0; i < n; ++i)
    if (static_cast<long>(rows[i].size()) != n)
      throw data_error(path + ": row " + std::to_string(i + 1) + " has " +
                       std::to_string(rows[i].size()) + " columns, expected " +
                       std::to_string(n));

  Network net(static_cast<int>(n), kind, domain);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      const double v = rows[i][j];
      if (i == j) {
        if (!kind.loops()) {
          if (v != 0.0)
            throw data_error(path + ": nonzero diagonal at row " + std::to_string(i + 1) +
                             " but kind " + to_string(kind) + " disallows self-loops");
          continue;
        }
        net.set(static_cast<int>(i), static_cast<int>(j), v);
        continue;
      }
      if (kind.undirected() && i > j) {
        const double mirror = rows[j][i];
        if (v != 0.0 && v != mirror)
          throw data_error(path + ": lower-triangle entry (" + std::to_string(i + 1) + "," +
                           std::to_string(j + 1) +
                           ") must mirror the upper triangle or be zero");
        continue;
      }
      net.set(static_cast<int>(i), static_cast<int>(j), v);
    }
  return net;
}

inline void write_dense_csv(const Network& net, const std::string& path) {
  auto out = detail::open_out(path);
  out << "# netsplit-dense n=" << net.n() << " kind=" << to_string(net.kind())
      << " domain=" << to_string(net.domain()) << "\n";
  for (int i = 0; i < net.n(); ++i) {
    for (int j = 0; j < net.n(); ++j) {
      if (j) out << ',';
      const bool off_j = i == j && !net.kind().loops();
      out << (off_j ? "0" : detail::format_double(net.value(i, j)));
    }
    out << '\n';
  }
  if (!out) throw data_error("write failed: " + path);
}

enum class FileFormat { autodetect, edgelist, dense };

inline FileFormat parse_format(const std::string& token) {
  if (token == "auto") return FileFormat::autodetect;
  if (token == "edgelist") return FileFormat::edgelist;
  if (token == "csv" || token == "dense") return FileFormat::dense;
  throw std::invalid_argument("unknown format '" + token + "' (expected auto|edgelist|csv)");
}

/// auto: `.csv` files are dense matrices, anything else is an edge list.
inline Network read_network(const std::string& path, FileFormat fmt, int n_hint,
                            NetworkKind kind, EdgeDomain domain) {
  if (fmt == FileFormat::autodetect)
    fmt = path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? FileFormat::dense
                                                                     : FileFormat::edgelist;
  return fmt == FileFormat::dense ? read_dense_csv(path, kind, domain)
                                  : read_edge_list(path, n_hint, kind, domain);
}

inline void write_network(const Network& net, const std::string& path) {
  const bool dense =
      path.size() >= 4 && path.substr(path.size() - 4) == ".csv";
  if (dense)
    write_dense_csv(net, path);
  else
    write_edge_list(net, path);
}

/// Labels files: one 1-based label per line.
inline void write_labels(const CommunityAssignment& z, const std::string& path) {
  auto out = detail::open_out(path);
  for (int lab : z.labels) out << (lab + 1) << '\n';
  if (!out) throw data_error("write failed: " + path);
}

inline CommunityAssignment read_labels(const std::string& path) {
  auto in = detail::open_in(path);
  std::string line;
  long lineno = 0;
  CommunityAssignment z;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_comment_or_blank(line)) continue;
    long lab = 0;
    if (!detail::parse_int(detail::split_fields(line)[0], lab) || lab < 1)
      throw data_error(path + ": bad label at line " + std::to_string(lineno));
    z.labels.push_back(static_cast<int>(lab) - 1);
    z.K = std::max(z.K, static_cast<int>(lab));
  }
  if (z.labels.empty()) throw data_error(path + ": no labels");
  return z;
}

inline nlohmann::json result_to_json(const InferenceResult& r) {
  nlohmann::json j;
  j["estimate"] = r.estimate;
  j["std_error"] = r.std_error;
  j["lower"] = r.lower;
  j["upper"] = r.upper;
  j["level"] = r.level;
  j["target"] = r.target == TargetKind::xi ? "xi" : "theta";
  j["contrast"] = r.contrast;
  j["gamma_or_epsilon"] = r.split_param;
  if (!r.warnings.empty()) j["warnings"] = r.warnings;
  return j;
}

inline void write_results_json(const InferenceResult& r, const std::string& path) {
  auto out = detail::open_out(path);
  out << result_to_json(r).dump(2) << '\n';
  if (!out) throw data_error("write failed: " + path);
}

}  // namespace netsplit
