#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace sidkit {

enum class Metric { Fid, Kid, Csid, MinSin };

std::string to_string(Metric m);
/// Accepts fid, kid, csid, min_sin (alias: sintheta). Throws LookupError.
Metric parse_metric(const std::string& name);

struct MetricCell {
  std::optional<double> fid;
  std::optional<double> kid;
  std::optional<double> csid;
  std::optional<double> min_sin;

  std::optional<double>& operator[](Metric m);
  const std::optional<double>& operator[](Metric m) const;
};

/// Pairwise metric values keyed by (source, target), plus caller-supplied
/// exclusions (e.g. grayscale sources against color targets).
class MetricTable {
 public:
  using Key = std::pair<std::string, std::string>;  // (source, target)

  void set(const std::string& source, const std::string& target, Metric m,
           double value);
  void exclude(const std::string& source, const std::string& target,
               std::string reason);

  const std::set<std::string>& sources() const noexcept { return sources_; }
  const std::set<std::string>& targets() const noexcept { return targets_; }
  const std::map<Key, MetricCell>& cells() const noexcept { return cells_; }
  const std::map<Key, std::string>& exclusions() const noexcept {
    return exclusions_;
  }
  bool is_excluded(const std::string& source, const std::string& target) const;

 private:
  std::set<std::string> sources_;
  std::set<std::string> targets_;
  std::map<Key, MetricCell> cells_;
  std::map<Key, std::string> exclusions_;
};

/// Parses `source,target,metric,value[,excluded,reason]` with a header row.
/// `value` may be empty on rows that only mark an exclusion.
MetricTable parse_metric_table(const std::string& text);
MetricTable read_metric_table(const std::string& path);

struct RankedSource {
  std::string source;
  double borda_score = 0.0;
  std::map<std::string, int> per_metric_rank;  // 1-based, by metric name
  std::vector<std::string> flags;
};

struct RankingResult {
  enum class Method { SingleMetric, BordaVote };

  std::string target;
  Method method = Method::SingleMetric;
  std::vector<std::string> metrics;
  std::vector<RankedSource> ordered_sources;
};

/// Ascending by metric value. For csid, negative values (under-diverse
/// sources) are placed after every non-negative one, ordered by |csid|.
RankingResult rank_single(const MetricTable& table, const std::string& target,
                          Metric metric);

/// Borda count over the given metrics: a source at position k of K in a
/// metric's ranking earns K - k points.
RankingResult rank_vote(const MetricTable& table, const std::string& target,
                        const std::vector<Metric>& metrics);

/// `rank,source,borda,<metric>_rank...,flags`
void write_ranking_csv(const RankingResult& result, std::ostream& out);

}  // namespace sidkit
