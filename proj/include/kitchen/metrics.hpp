#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "kitchen/events.hpp"
#include "kitchen/tasks.hpp"

namespace kitchen {

/// Raised when a metric has no meaningful value (0/0 and friends).
class UndefinedMetric : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

int throughput_at(const EventLog& log, Tick t);
double mean_completion_time(const EventLog& log, MealKind kind);

/// Ticks each agent held an assignment: from CLAIM-with-step, ACCEPT or JOIN
/// until STEP_DONE or RELEASE. Assignments still open at the end of the log
/// run to the last logged tick.
std::vector<double> workloads(const EventLog& log, int n_agents);

/// Gini coefficient via the sorted-rank formula. All-zero input gives 0.
double gini(std::span<const double> values);
double workload_gini(const EventLog& log, int n_agents);

/// Number of AGENT roster events, or max actor id + 1 when there is no roster.
int agent_count(const EventLog& log);

/// Average over claimed meals of |{leader} + accepted recruits + joiners|.
double mean_team_size(const EventLog& log);

struct CollaborationNetwork {
  std::vector<std::string> specialty;            // node attribute, indexed by agent id
  std::map<std::pair<int, int>, int> weights;    // key (lo, hi), lo < hi

  int node_count() const { return static_cast<int>(specialty.size()); }
  int edge_count() const { return static_cast<int>(weights.size()); }
  void add(int a, int b, int w = 1);
};

/// Edge weight = accepted help requests between the pair + meals on which both
/// completed at least one step.
CollaborationNetwork build_network(const EventLog& log);

/// Categorical (specialty) assortativity over the unweighted edge set.
double assortativity(const CollaborationNetwork& net);

/// Weighted modularity of a node -> community labelling.
double modularity(const CollaborationNetwork& net, std::span<const int> community);

struct Partition {
  std::vector<int> community;  // labels numbered by first appearance
  double q = 0.0;
};

/// Agglomerative greedy maximisation: repeatedly merge the pair with the
/// largest positive gain (ties: smallest index pair) until no gain is left.
Partition greedy_modularity(const CollaborationNetwork& net);

struct ComponentStats {
  int n_components = 0;
  double largest_fraction = 0.0;
  double aspl = 0.0;  // over intra-component pairs; 0 when there are none
};

ComponentStats component_stats(const CollaborationNetwork& net);

struct SummaryStats {
  int meals_served = 0;
  std::optional<double> mean_completion_steak;
  std::optional<double> mean_completion_soup;
  double workload_gini = 0.0;
  std::optional<double> assortativity;
  std::optional<double> modularity;
  std::vector<int> partition;
  int n_components = 0;
  double largest_component_fraction = 0.0;
  double aspl = 0.0;
  double mean_team_size = 0.0;
};

SummaryStats summarize(const EventLog& log);

}  // namespace kitchen
