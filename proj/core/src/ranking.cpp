#include "sidkit/ranking.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "sidkit/errors.hpp"
#include "sidkit/signed_distance.hpp"

namespace sidkit {

std::string to_string(Metric m) {
  switch (m) {
    case Metric::Fid: return "fid";
    case Metric::Kid: return "kid";
    case Metric::Csid: return "csid";
    case Metric::MinSin: return "min_sin";
  }
  return "unknown";
}

Metric parse_metric(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (s == "fid") return Metric::Fid;
  if (s == "kid") return Metric::Kid;
  if (s == "csid") return Metric::Csid;
  if (s == "min_sin" || s == "sintheta") return Metric::MinSin;
  throw LookupError("unknown metric '" + name + "'");
}

std::optional<double>& MetricCell::operator[](Metric m) {
  switch (m) {
    case Metric::Fid: return fid;
    case Metric::Kid: return kid;
    case Metric::Csid: return csid;
    case Metric::MinSin: break;
  }
  return min_sin;
}

const std::optional<double>& MetricCell::operator[](Metric m) const {
  return const_cast<MetricCell&>(*this)[m];
}

void MetricTable::set(const std::string& source, const std::string& target,
                      Metric m, double value) {
  if (!std::isfinite(value)) {
    throw ArgumentError("metric value for (" + source + ", " + target +
                        ") is not finite");
  }
  sources_.insert(source);
  targets_.insert(target);
  cells_[{source, target}][m] = value;
}

void MetricTable::exclude(const std::string& source, const std::string& target,
                          std::string reason) {
  if (reason.empty()) reason = "excluded";
  sources_.insert(source);
  targets_.insert(target);
  exclusions_[{source, target}] = std::move(reason);
}

bool MetricTable::is_excluded(const std::string& source,
                              const std::string& target) const {
  return exclusions_.count({source, target}) > 0;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

bool parse_flag(const std::string& s, long line_no) {
  std::string v = s;
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v.empty() || v == "0" || v == "false" || v == "no") return false;
  if (v == "1" || v == "true" || v == "yes") return true;
  throw FormatError("line " + std::to_string(line_no) +
                    ": cannot parse excluded flag '" + s + "'");
}

struct Participant {
  std::string source;
  double value;
};

// Sorted participants of one metric for one target.
std::vector<Participant> order_metric(const MetricTable& table,
                                      const std::string& target, Metric m) {
  std::vector<Participant> parts;
  for (const auto& [key, cell] : table.cells()) {
    if (key.second != target || key.first == target) continue;
    if (table.is_excluded(key.first, target)) continue;
    if (cell[m]) parts.push_back({key.first, *cell[m]});
  }
  const bool demote_negative = m == Metric::Csid;
  std::sort(parts.begin(), parts.end(),
            [demote_negative](const Participant& a, const Participant& b) {
              if (demote_negative) {
                const bool na = a.value < 0.0;
                const bool nb = b.value < 0.0;
                if (na != nb) return nb;
                const double ka = std::fabs(a.value);
                const double kb = std::fabs(b.value);
                if (ka != kb) return ka < kb;
              } else if (a.value != b.value) {
                return a.value < b.value;
              }
              return a.source < b.source;
            });
  return parts;
}

void require_target(const MetricTable& table, const std::string& target) {
  if (!table.targets().count(target)) {
    throw LookupError("unknown target '" + target + "'");
  }
}

RankingResult tally(const MetricTable& table, const std::string& target,
                    const std::vector<Metric>& metrics,
                    RankingResult::Method method) {
  require_target(table, target);
  if (metrics.empty()) throw ArgumentError("no metrics given for ranking");
  std::map<std::string, RankedSource> by_source;
  for (Metric m : metrics) {
    const auto parts = order_metric(table, target, m);
    const auto k_total = static_cast<double>(parts.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      RankedSource& rs = by_source[parts[k].source];
      rs.source = parts[k].source;
      rs.borda_score += k_total - static_cast<double>(k + 1);
      rs.per_metric_rank[to_string(m)] = static_cast<int>(k + 1);
      if (m == Metric::Csid && parts[k].value < 0.0) {
        rs.flags.push_back("negative-csid");
      }
    }
  }
  if (by_source.empty()) {
    std::string names;
    for (Metric m : metrics) names += (names.empty() ? "" : ",") + to_string(m);
    throw EmptyRankingError("no non-excluded source has " + names +
                            " for target '" + target + "'");
  }
  RankingResult out;
  out.target = target;
  out.method = method;
  for (Metric m : metrics) out.metrics.push_back(to_string(m));
  for (auto& [name, rs] : by_source) out.ordered_sources.push_back(std::move(rs));
  std::stable_sort(out.ordered_sources.begin(), out.ordered_sources.end(),
                   [](const RankedSource& a, const RankedSource& b) {
                     if (a.borda_score != b.borda_score) {
                       return a.borda_score > b.borda_score;
                     }
                     return a.source < b.source;
                   });
  return out;
}

}  // namespace

MetricTable parse_metric_table(const std::string& text) {
  MetricTable table;
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto f = split_csv_line(line);
    if (!header_seen) {
      header_seen = true;
      if (f.size() < 4 || f[0] != "source" || f[1] != "target" ||
          f[2] != "metric" || f[3] != "value") {
        throw FormatError("metric table header must start with "
                          "'source,target,metric,value'");
      }
      continue;
    }
    if (f.size() < 4 || f.size() > 6) {
      throw FormatError("line " + std::to_string(line_no) + ": expected 4-6 "
                        "fields, found " + std::to_string(f.size()));
    }
    if (f[0].empty() || f[1].empty()) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": empty source or target");
    }
    const bool excluded = f.size() >= 5 && parse_flag(f[4], line_no);
    if (excluded) {
      table.exclude(f[0], f[1], f.size() == 6 ? f[5] : "");
    }
    if (f[3].empty()) {
      if (!excluded) {
        throw FormatError("line " + std::to_string(line_no) + ": empty value");
      }
      continue;
    }
    Metric m;
    try {
      m = parse_metric(f[2]);
    } catch (const LookupError&) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": unknown metric '" + f[2] + "'");
    }
    double v = 0.0;
    const char* first = f[3].data();
    const char* last = first + f[3].size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
      throw FormatError("line " + std::to_string(line_no) +
                        ": cannot parse value '" + f[3] + "'");
    }
    table.set(f[0], f[1], m, v);
  }
  if (!header_seen) throw FormatError("metric table is empty");
  return table;
}

MetricTable read_metric_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric_table(ss.str());
}

RankingResult rank_single(const MetricTable& table, const std::string& target,
                          Metric metric) {
  return tally(table, target, {metric}, RankingResult::Method::SingleMetric);
}

RankingResult rank_vote(const MetricTable& table, const std::string& target,
                        const std::vector<Metric>& metrics) {
  return tally(table, target, metrics, RankingResult::Method::BordaVote);
}

void write_ranking_csv(const RankingResult& result, std::ostream& out) {
  out << "rank,source,borda";
  for (const auto& m : result.metrics) out << ',' << m << "_rank";
  out << ",flags\n";
  int rank = 0;
  for (const auto& rs : result.ordered_sources) {
    out << ++rank << ',' << rs.source << ',' << format_double(rs.borda_score);
    for (const auto& m : result.metrics) {
      out << ',';
      if (auto it = rs.per_metric_rank.find(m); it != rs.per_metric_rank.end()) {
        out << it->second;
      }
    }
    out << ',';
    for (std::size_t i = 0; i < rs.flags.size(); ++i) {
      out << (i ? ";" : "") << rs.flags[i];
    }
    out << '\n';
  }
}

}  // namespace sidkit
