#include "edhg/train.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <thread>

#include <fmt/format.h>

#include "edhg/error.hpp"
#include "edhg/log.hpp"

namespace edhg {

namespace {

constexpr double kSigmoidBound = 30.0;
constexpr int kMaxRedraws = 100;
constexpr long long kFiniteCheckInterval = 1'000'000;
constexpr std::uint64_t kInitSeedSalt = 0x9e3779b97f4a7c15ULL;

double clip(double x) { return std::clamp(x, -kSigmoidBound, kSigmoidBound); }
double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Row access for the single-threaded path.
struct PlainAccess {
  static double load(double& x) { return x; }
  static void store(double& x, double v) { x = v; }
};

// Row access for asynchronous workers: relaxed atomics, so concurrent updates
// to the same row may be lost but never tear.
struct SharedAccess {
  static double load(double& x) { return std::atomic_ref<double>(x).load(std::memory_order_relaxed); }
  static void store(double& x, double v) {
    std::atomic_ref<double>(x).store(v, std::memory_order_relaxed);
  }
};

struct Scratch {
  std::vector<double> target;
  std::vector<double> context;
  std::vector<double> error;
  std::vector<std::uint32_t> negatives;

  void resize(std::size_t d) {
    target.resize(d);
    context.resize(d);
    error.assign(d, 0.0);
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

template <class Access>
double update_kernel(EmbeddingStore& store, GraphRole role, std::uint32_t i, std::uint32_t j,
                     std::span<const std::uint32_t> negatives, double lr) {
  const std::size_t d = store.dim();
  Scratch& ws = scratch();
  ws.resize(d);
  auto target_row = store.row(role.target, j);
  for (std::size_t c = 0; c < d; ++c) ws.target[c] = Access::load(target_row[c]);

  double loss = 0.0;
  const auto visit = [&](std::uint32_t ctx, bool positive) {
    auto row = store.row(role.context, ctx);
    for (std::size_t c = 0; c < d; ++c) ws.context[c] = Access::load(row[c]);
    const double x = clip(dot(ws.context, ws.target));
    double g = 0.0;
    if (positive) {
      loss += std::log1p(std::exp(-x));
      g = 1.0 - sigmoid(x);
    } else {
      loss += std::log1p(std::exp(x));
      g = -sigmoid(x);
    }
    g *= lr;
    for (std::size_t c = 0; c < d; ++c) {
      ws.error[c] += g * ws.context[c];
      Access::store(row[c], ws.context[c] + g * ws.target[c]);
    }
  };
  visit(i, true);
  for (std::uint32_t n : negatives) visit(n, false);

  for (std::size_t c = 0; c < d; ++c) {
    Access::store(target_row[c], Access::load(target_row[c]) + ws.error[c]);
  }
  return loss;
}

template <class Access>
double train_step(EmbeddingStore& store, const BipartiteSampler& sampler, int m, double lr,
                  Rng& rng) {
  const Edge& e = sampler.sample_edge(rng);
  auto& negs = scratch().negatives;
  negs.clear();
  sampler.sample_negatives(e, m, rng, negs);
  return update_kernel<Access>(store, sampler.role(), e.context, e.target, negs, lr);
}

struct WorkerLog {
  std::vector<double> sum;
  std::vector<long long> count;
};

template <class Access>
void run_worker(EmbeddingStore& store, std::span<const BipartiteSampler> samplers,
                const TrainConfig& cfg, int thread_id, long long steps, WorkerLog& wlog,
                const std::atomic<bool>& stop) {
  Rng rng(cfg.seed + static_cast<std::uint64_t>(thread_id));
  wlog.sum.assign(static_cast<std::size_t>(cfg.checkpoints), 0.0);
  wlog.count.assign(static_cast<std::size_t>(cfg.checkpoints), 0);
  const double lr_span = cfg.lr_final - cfg.lr_initial;
  for (long long s = 0; s < steps; ++s) {
    if (stop.load(std::memory_order_relaxed)) return;
    const double lr =
        cfg.lr_initial + lr_span * static_cast<double>(s) / static_cast<double>(steps);
    const auto& sampler = samplers[static_cast<std::size_t>(s % static_cast<long long>(samplers.size()))];
    const double loss = train_step<Access>(store, sampler, cfg.negatives, lr, rng);
    const long long global_step = s * cfg.threads + thread_id;
    if (!std::isfinite(loss)) {
      throw DivergenceError(fmt::format("non-finite loss at step {}", global_step), global_step);
    }
    const auto seg = static_cast<std::size_t>(s * cfg.checkpoints / steps);
    wlog.sum[seg] += loss;
    ++wlog.count[seg];
    if (cfg.threads == 1 && (s + 1) % kFiniteCheckInterval == 0 && !store.all_finite()) {
      throw DivergenceError(fmt::format("non-finite embedding at step {}", s + 1), s + 1);
    }
  }
}

}  // namespace

std::optional<Variant> parse_variant(std::string_view name) {
  if (name == "edhg") return Variant::Edhg;
  if (name == "edhg-ns") return Variant::EdhgNs;
  if (name == "edhg-poi") return Variant::EdhgPoi;
  return std::nullopt;
}

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::Edhg: return "edhg";
    case Variant::EdhgNs: return "edhg-ns";
    case Variant::EdhgPoi: return "edhg-poi";
  }
  return "edhg";
}

void TrainConfig::validate() const {
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (negatives < 0) throw ValidationError("negatives must be >= 0");
  if (dim < 1) throw ValidationError("dim must be >= 1");
  if (!(lr_initial > 0.0) || !(lr_final > 0.0)) throw ValidationError("learning rates must be positive");
  if (!(lr_final < lr_initial)) throw ValidationError("lr_final must be below lr_initial");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  if (checkpoints < 1) throw ValidationError("checkpoints must be >= 1");
}

double edge_loss(std::span<const double> z_i, std::span<const double> z_j,
                 std::span<const std::span<const double>> negatives) {
  double loss = std::log1p(std::exp(-clip(dot(z_i, z_j))));
  for (const auto& z_n : negatives) loss += std::log1p(std::exp(clip(dot(z_n, z_j))));
  return loss;
}

double sgd_update(EmbeddingStore& store, GraphRole role, std::uint32_t context,
                  std::uint32_t target, std::span<const std::uint32_t> negatives, double lr) {
  return update_kernel<PlainAccess>(store, role, context, target, negatives, lr);
}

BipartiteSampler::BipartiteSampler(const BipartiteGraph& g, NoiseModel noise)
    : graph_(&g), edges_(edge_sampler(g)), noise_(std::move(noise)) {}

void BipartiteSampler::sample_negatives(const Edge& e, int m, Rng& rng,
                                        std::vector<std::uint32_t>& out) const {
  const bool same_kind = graph_->context_kind() == graph_->target_kind();
  for (int n = 0; n < m; ++n) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const std::uint32_t c = noise_.sample(e.target, rng);
      if (c == e.context || (same_kind && c == e.target)) continue;
      out.push_back(c);
      break;
    }
  }
}

double train_bipartite(EmbeddingStore& store, const BipartiteSampler& sampler, int m, double lr,
                       Rng& rng) {
  return train_step<PlainAccess>(store, sampler, m, lr, rng);
}

std::vector<BipartiteSampler> make_samplers(const HeteroGraph& graph, Variant variant) {
  std::vector<const BipartiteGraph*> graphs = {&graph.poi_user, &graph.poi_time,
                                               &graph.activity_poi};
  if (variant == Variant::EdhgPoi) {
    if (!graph.poi_poi) throw ValidationError("edhg-poi requires POI-POI edges in the graph");
    graphs.push_back(&*graph.poi_poi);
  }
  std::erase_if(graphs, [](const BipartiteGraph* g) {
    if (g->edge_count() > 0) return false;
    log().warn("skipping {}-{} graph: it has no edges", to_string(g->context_kind()),
               to_string(g->target_kind()));
    return true;
  });
  if (graphs.empty()) throw ValidationError("graph has no edges to train on");
  std::vector<BipartiteSampler> samplers;
  samplers.reserve(graphs.size());
  if (variant == Variant::EdhgNs) {
    for (const auto* g : graphs) samplers.emplace_back(*g, NoiseModel::unigram(*g));
  } else {
    const CategoryPrior prior = category_prior(graph);
    for (const auto* g : graphs) {
      samplers.emplace_back(
          *g, NoiseModel::conditional(*g, prior, context_categories(*g, graph.poi_category)));
    }
  }
  return samplers;
}

TrainResult joint_train(const HeteroGraph& graph, const TrainConfig& config) {
  config.validate();
  const auto samplers = make_samplers(graph, config.variant);

  TrainResult result;
  result.store = init_embeddings(graph.counts, config.dim, config.seed ^ kInitSeedSalt);

  const int threads = config.threads;
  std::vector<WorkerLog> logs(static_cast<std::size_t>(threads));
  std::atomic<bool> stop{false};
  if (threads == 1) {
    run_worker<PlainAccess>(result.store, samplers, config, 0, config.iterations, logs[0], stop);
  } else {
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    {
      std::vector<std::jthread> pool;
      for (int t = 0; t < threads; ++t) {
        const long long steps = config.iterations / threads + (t < config.iterations % threads ? 1 : 0);
        pool.emplace_back([&, t, steps] {
          try {
            run_worker<SharedAccess>(result.store, samplers, config, t, steps,
                                     logs[static_cast<std::size_t>(t)], stop);
          } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
            stop.store(true);
          }
        });
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }
  if (!result.store.all_finite()) {
    throw DivergenceError("non-finite embedding after training", config.iterations);
  }

  for (int k = 0; k < config.checkpoints; ++k) {
    double sum = 0.0;
    long long count = 0;
    for (const auto& l : logs) {
      sum += l.sum[static_cast<std::size_t>(k)];
      count += l.count[static_cast<std::size_t>(k)];
    }
    if (count == 0) continue;
    result.loss_curve.push_back(
        LossSample{config.iterations * (k + 1) / config.checkpoints, sum / static_cast<double>(count)});
  }
  if (!result.loss_curve.empty()) result.final_loss = result.loss_curve.back().estimate;
  log().info("trained {} steps ({}), final loss {:.6f}", config.iterations,
             to_string(config.variant), result.final_loss);
  return result;
}

double exact_objective(const EmbeddingStore& store, const BipartiteGraph& g) {
  const std::size_t n_ctx = g.context_count();
  std::vector<double> scores(n_ctx);
  double objective = 0.0;
  for (std::uint32_t j = 0; j < g.target_count(); ++j) {
    const auto nbrs = g.neighbors_of_target(j);
    if (nbrs.empty()) continue;
    const auto z_j = store.row(g.target_kind(), j);
    double peak = -std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < n_ctx; ++i) {
      scores[i] = dot(store.row(g.context_kind(), i), z_j);
      peak = std::max(peak, scores[i]);
    }
    double z = 0.0;
    for (double s : scores) z += std::exp(s - peak);
    const double log_norm = peak + std::log(z);
    for (const Neighbor& nb : nbrs) objective += nb.weight * (log_norm - scores[nb.context]);
  }
  return objective;
}

}  // namespace edhg
