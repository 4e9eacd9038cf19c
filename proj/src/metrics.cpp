#include "kitchen/metrics.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <tuple>

namespace kitchen {

int throughput_at(const EventLog& log, Tick t) {
  return static_cast<int>(std::count_if(log.begin(), log.end(), [t](const Event& e) {
    return e.kind == EventKind::MealServed && e.tick <= t;
  }));
}

double mean_completion_time(const EventLog& log, MealKind kind) {
  double sum = 0.0;
  int n = 0;
  const auto want = to_string(kind);
  for (const auto& e : log) {
    if (e.kind != EventKind::MealServed) continue;
    if (e.extra.value("meal_kind", std::string{}) != want) continue;
    sum += static_cast<double>(e.tick);
    ++n;
  }
  if (n == 0) throw UndefinedMetric("no " + std::string(want) + " meals served");
  return sum / n;
}

int agent_count(const EventLog& log) {
  int roster = 0;
  int max_actor = -1;
  for (const auto& e : log) {
    if (e.kind == EventKind::Agent) ++roster;
    if (e.actor) max_actor = std::max(max_actor, *e.actor);
  }
  return roster > 0 ? roster : max_actor + 1;
}

namespace {

bool starts_assignment(const Event& e) {
  switch (e.kind) {
    case EventKind::Claim: return e.step.has_value();
    case EventKind::Accept: return !e.extra.value("stale", false);
    case EventKind::Join: return true;
    default: return false;
  }
}

}  // namespace

std::vector<double> workloads(const EventLog& log, int n_agents) {
  std::vector<double> load(static_cast<std::size_t>(std::max(n_agents, 0)), 0.0);
  std::vector<std::optional<Tick>> open(load.size());
  Tick last = 0;
  for (const auto& e : log) {
    last = std::max(last, e.tick);
    if (!e.actor || *e.actor < 0 || *e.actor >= n_agents) continue;
    const auto a = static_cast<std::size_t>(*e.actor);
    if (starts_assignment(e)) {
      open[a] = e.tick;
    } else if ((e.kind == EventKind::StepDone || e.kind == EventKind::Release) && open[a]) {
      load[a] += static_cast<double>(e.tick - *open[a]);
      open[a].reset();
    }
  }
  for (std::size_t a = 0; a < load.size(); ++a)
    if (open[a]) load[a] += static_cast<double>(last - *open[a]);
  return load;
}

double gini(std::span<const double> values) {
  if (values.empty()) return 0.0;
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  const double total = std::accumulate(v.begin(), v.end(), 0.0);
  if (total <= 0.0) return 0.0;
  const double n = static_cast<double>(v.size());
  double ranked = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) ranked += static_cast<double>(i + 1) * v[i];
  return 2.0 * ranked / (n * total) - (n + 1.0) / n;
}

double workload_gini(const EventLog& log, int n_agents) {
  if (n_agents < 1) throw std::invalid_argument("workload_gini needs at least one agent");
  const auto w = workloads(log, n_agents);
  return gini(w);
}

double mean_team_size(const EventLog& log) {
  std::map<MealId, std::set<AgentId>> teams;
  for (const auto& e : log) {
    if (!e.meal || !e.actor) continue;
    if (e.kind == EventKind::Claim || e.kind == EventKind::Join ||
        (e.kind == EventKind::Accept && !e.extra.value("stale", false)))
      teams[*e.meal].insert(*e.actor);
  }
  if (teams.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [m, t] : teams) sum += static_cast<double>(t.size());
  return sum / static_cast<double>(teams.size());
}

void CollaborationNetwork::add(int a, int b, int w) {
  if (a == b) return;
  weights[{std::min(a, b), std::max(a, b)}] += w;
}

CollaborationNetwork build_network(const EventLog& log) {
  CollaborationNetwork net;
  const int n = agent_count(log);
  net.specialty.assign(static_cast<std::size_t>(n), "UNKNOWN");
  std::map<MealId, std::set<AgentId>> finishers;
  for (const auto& e : log) {
    if (!e.actor) continue;
    const int a = *e.actor;
    if (e.kind == EventKind::Agent && a >= 0 && a < n) {
      net.specialty[static_cast<std::size_t>(a)] = e.extra.value("specialty", std::string("UNKNOWN"));
    } else if (e.kind == EventKind::Accept && !e.extra.value("stale", false) && e.extra.contains("leader")) {
      net.add(a, e.extra["leader"].get<int>());
    } else if (e.kind == EventKind::StepDone && e.meal) {
      finishers[*e.meal].insert(a);
    }
  }
  for (const auto& [meal, who] : finishers) {
    for (auto i = who.begin(); i != who.end(); ++i)
      for (auto j = std::next(i); j != who.end(); ++j) net.add(*i, *j);
  }
  return net;
}

double assortativity(const CollaborationNetwork& net) {
  if (net.weights.empty()) throw UndefinedMetric("assortativity of an edgeless network");
  // Same-class edge fraction against the squared share of edge ends per class.
  std::map<std::string, double> ends;
  double same = 0.0;
  for (const auto& [edge, w] : net.weights) {
    const auto& ca = net.specialty[static_cast<std::size_t>(edge.first)];
    const auto& cb = net.specialty[static_cast<std::size_t>(edge.second)];
    ends[ca] += 1.0;
    ends[cb] += 1.0;
    if (ca == cb) same += 1.0;
  }
  const double m = static_cast<double>(net.weights.size());
  double expected = 0.0;
  for (const auto& [cls, k] : ends) expected += (k / (2.0 * m)) * (k / (2.0 * m));
  const double denom = 1.0 - expected;
  if (denom <= 0.0) throw UndefinedMetric("assortativity with a single attribute class");
  return (same / m - expected) / denom;
}

double modularity(const CollaborationNetwork& net, std::span<const int> community) {
  double total = 0.0;
  for (const auto& [edge, w] : net.weights) total += w;
  if (total <= 0.0) throw UndefinedMetric("modularity of an edgeless network");
  std::map<int, double> inside;
  std::map<int, double> degree;
  for (const auto& [edge, w] : net.weights) {
    const int ca = community[static_cast<std::size_t>(edge.first)];
    const int cb = community[static_cast<std::size_t>(edge.second)];
    degree[ca] += w;
    degree[cb] += w;
    if (ca == cb) inside[ca] += w;
  }
  double q = 0.0;
  for (const auto& [c, d] : degree) {
    const double a = d / (2.0 * total);
    q += inside[c] / total - a * a;
  }
  return q;
}

Partition greedy_modularity(const CollaborationNetwork& net) {
  const int n = net.node_count();
  double total = 0.0;
  for (const auto& [edge, w] : net.weights) total += w;
  if (total <= 0.0) throw UndefinedMetric("modularity of an edgeless network");

  // between[i][j]: edge weight between live communities i and j (i != j).
  std::vector<std::vector<double>> between(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  std::vector<double> deg(static_cast<std::size_t>(n), 0.0);
  for (const auto& [edge, w] : net.weights) {
    const auto a = static_cast<std::size_t>(edge.first);
    const auto b = static_cast<std::size_t>(edge.second);
    between[a][b] += w;
    between[b][a] += w;
    deg[a] += w;
    deg[b] += w;
  }
  std::vector<int> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  std::vector<bool> live(static_cast<std::size_t>(n), true);

  const double two_m = 2.0 * total;
  while (true) {
    double best = 0.0;
    int bi = -1;
    int bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!live[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!live[static_cast<std::size_t>(j)]) continue;
        const double e = between[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (e <= 0.0) continue;
        const double gain = 2.0 * (e / two_m - (deg[static_cast<std::size_t>(i)] / two_m) *
                                                   (deg[static_cast<std::size_t>(j)] / two_m));
        if (gain > best + 1e-15) {
          best = gain;
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0) break;
    const auto i = static_cast<std::size_t>(bi);
    const auto j = static_cast<std::size_t>(bj);
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
      if (k == i || k == j || !live[k]) continue;
      between[i][k] += between[j][k];
      between[k][i] = between[i][k];
      between[j][k] = between[k][j] = 0.0;
    }
    between[i][j] = between[j][i] = 0.0;
    deg[i] += deg[j];
    deg[j] = 0.0;
    live[j] = false;
    for (auto& l : label)
      if (l == bj) l = bi;
  }

  Partition p;
  std::map<int, int> renumber;
  p.community.reserve(label.size());
  for (int l : label) {
    auto [it, fresh] = renumber.try_emplace(l, static_cast<int>(renumber.size()));
    p.community.push_back(it->second);
  }
  p.q = modularity(net, p.community);
  return p;
}

ComponentStats component_stats(const CollaborationNetwork& net) {
  const int n = net.node_count();
  if (n < 1) throw std::invalid_argument("component_stats needs at least one node");
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (const auto& [edge, w] : net.weights) {
    if (w < 1) continue;
    adj[static_cast<std::size_t>(edge.first)].push_back(edge.second);
    adj[static_cast<std::size_t>(edge.second)].push_back(edge.first);
  }

  ComponentStats out;
  std::vector<int> comp(static_cast<std::size_t>(n), -1);
  int largest = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0) continue;
    int size = 0;
    std::deque<int> q{s};
    comp[static_cast<std::size_t>(s)] = out.n_components;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      ++size;
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(v)] >= 0) continue;
        comp[static_cast<std::size_t>(v)] = out.n_components;
        q.push_back(v);
      }
    }
    largest = std::max(largest, size);
    ++out.n_components;
  }
  out.largest_fraction = static_cast<double>(largest) / n;

  double path_sum = 0.0;
  long pairs = 0;
  for (int s = 0; s < n; ++s) {
    std::vector<int> dist(static_cast<std::size_t>(n), -1);
    dist[static_cast<std::size_t>(s)] = 0;
    std::deque<int> q{s};
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] >= 0) continue;
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        q.push_back(v);
      }
    }
    for (int t = s + 1; t < n; ++t) {
      if (dist[static_cast<std::size_t>(t)] > 0) {
        path_sum += dist[static_cast<std::size_t>(t)];
        ++pairs;
      }
    }
  }
  out.aspl = pairs > 0 ? path_sum / static_cast<double>(pairs) : 0.0;
  return out;
}

SummaryStats summarize(const EventLog& log) {
  SummaryStats s;
  s.meals_served = throughput_at(log, std::numeric_limits<Tick>::max());
  try {
    s.mean_completion_steak = mean_completion_time(log, MealKind::Steak);
  } catch (const UndefinedMetric&) {
  }
  try {
    s.mean_completion_soup = mean_completion_time(log, MealKind::OnionSoup);
  } catch (const UndefinedMetric&) {
  }
  const int n = agent_count(log);
  s.workload_gini = n > 0 ? workload_gini(log, n) : 0.0;
  const auto net = build_network(log);
  try {
    s.assortativity = assortativity(net);
  } catch (const UndefinedMetric&) {
  }
  if (net.edge_count() > 0) {
    auto p = greedy_modularity(net);
    s.modularity = p.q;
    s.partition = std::move(p.community);
  }
  if (n > 0) {
    const auto cs = component_stats(net);
    s.n_components = cs.n_components;
    s.largest_component_fraction = cs.largest_fraction;
    s.aspl = cs.aspl;
  }
  s.mean_team_size = mean_team_size(log);
  return s;
}

}  // namespace kitchen
