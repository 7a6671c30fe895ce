#include "edhg/cli.hpp"

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <unordered_map>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "edhg/datagen.hpp"
#include "edhg/error.hpp"
#include "edhg/eval.hpp"
#include "edhg/graph.hpp"
#include "edhg/ingest.hpp"
#include "edhg/log.hpp"
#include "edhg/predict.hpp"
#include "edhg/train.hpp"
#include "files.hpp"
#include "manifest.hpp"

namespace edhg {
namespace {

namespace fs = std::filesystem;
using cli::RunManifest;
using cli::write_atomically;

const std::vector<std::string> kTimeModes = {"28", "hour4", "dow7"};
const std::vector<std::string> kVariants = {"edhg", "edhg-ns", "edhg-poi"};

// Snapshot of every option a subcommand saw, explicit or defaulted.
void record_options(const CLI::App& app, nlohmann::ordered_json& config) {
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help") continue;
    if (opt->get_type_size() == 0) {
      config[name] = opt->count() > 0;
    } else if (!opt->results().empty()) {
      const auto& r = opt->results();
      config[name] = r.size() == 1 ? nlohmann::ordered_json(r.front()) : nlohmann::ordered_json(r);
    } else if (!opt->get_default_str().empty()) {
      config[name] = opt->get_default_str();
    }
  }
}

fs::path manifest_next_to(const fs::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

// Header-led CSV with exactly the listed columns.
std::vector<std::vector<std::string>> read_table(const fs::path& path,
                                                 const std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open {}", path.string()));
  std::string line;
  if (!std::getline(in, line) || split_csv_line(line) != header) {
    throw ValidationError(fmt::format("{}: expected header '{}'", path.string(), fmt::join(header, ",")));
  }
  std::vector<std::vector<std::string>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (fields.size() != header.size()) {
      throw ValidationError(fmt::format("{}:{}: expected {} fields", path.string(), lineno, header.size()));
    }
    rows.push_back(std::move(fields));
  }
  if (in.bad()) throw IoError(fmt::format("failed reading {}", path.string()));
  return rows;
}

std::unordered_map<std::string, std::uint32_t> index_of(const std::vector<std::string>& ids) {
  std::unordered_map<std::string, std::uint32_t> m;
  for (std::size_t i = 0; i < ids.size(); ++i) m.emplace(ids[i], static_cast<std::uint32_t>(i));
  return m;
}

void check_store_matches(const EmbeddingStore& store, const HeteroGraph& graph) {
  for (int k = 0; k < kNodeKindCount; ++k) {
    const auto kind = static_cast<NodeKind>(k);
    if (store.count(kind) != graph.count(kind)) {
      throw ValidationError(fmt::format("embeddings have {} {} rows, graph has {}", store.count(kind),
                                        to_string(kind), graph.count(kind)));
    }
  }
}

// ---------------------------------------------------------------------------

struct DataArgs {
  std::string checkins;
  std::string venues;
  int min_checkins = 100;
  std::string window_begin;
  std::string window_end;

  void add(CLI::App& app) {
    app.add_option("--checkins", checkins, "check-in CSV (user_id,timestamp,poi_id)")->required();
    app.add_option("--venues", venues, "venue CSV")->required();
    app.add_option("--min-checkins,--min_checkins", min_checkins, "drop users with fewer records")
        ->capture_default_str();
    app.add_option("--window-begin", window_begin, "observation window start, YYYY-MM-DDTHH:MM");
    app.add_option("--window-end", window_end, "observation window end (exclusive)");
  }

  Dataset load(RunManifest& manifest) const {
    ParseOptions opts;
    if (!window_begin.empty() || !window_end.empty()) {
      const auto b = parse_timestamp(window_begin);
      const auto e = parse_timestamp(window_end);
      if (!b || !e) throw ValidationError("--window-begin and --window-end must both be valid timestamps");
      opts.window = ObservationWindow{*b, *e};
    }
    manifest.add_input("checkins", checkins);
    manifest.add_input("venues", venues);
    const auto parsed = read_checkins(checkins, opts);
    if (!parsed.malformed.empty()) {
      log().warn("{}: skipped {} malformed lines", checkins, parsed.malformed.size());
    }
    const auto v = read_venues(venues);
    Dataset data = filter_users(parsed.records, v, min_checkins);
    if (data.user_count() == 0) {
      throw ValidationError(fmt::format("no user has at least {} check-ins", min_checkins));
    }
    return data;
  }
};

struct TrainArgs {
  TrainConfig config;
  std::string variant = "edhg";
  double window_hours = 4.0;

  void add(CLI::App& app) {
    app.add_option("--iterations", config.iterations, "total edge samples")->capture_default_str();
    app.add_option("--negatives", config.negatives, "negatives per positive edge")->capture_default_str();
    app.add_option("--dim", config.dim, "embedding dimension")->capture_default_str();
    app.add_option("--lr_initial,--lr-initial", config.lr_initial, "starting learning rate")
        ->capture_default_str();
    app.add_option("--lr_final,--lr-final", config.lr_final, "final learning rate")->capture_default_str();
    app.add_option("--seed", config.seed, "random seed")->capture_default_str();
    app.add_option("--threads", config.threads, "worker threads")->capture_default_str();
    app.add_option("--variant", variant, "edhg, edhg-ns or edhg-poi")
        ->check(CLI::IsMember(kVariants))
        ->capture_default_str();
    app.add_option("--checkpoints", config.checkpoints, "loss-curve segments")->capture_default_str();
  }

  TrainConfig resolved() const {
    TrainConfig c = config;
    c.variant = *parse_variant(variant);
    c.validate();
    return c;
  }
};

void ensure_poi_poi(HeteroGraph& g, const Dataset& data, Variant v, double window_hours) {
  if (v == Variant::EdhgPoi && !g.poi_poi) g.poi_poi = add_poi_poi(data, window_hours);
}

// ---------------------------------------------------------------------------

struct GenCmd {
  GenConfig config;
  std::string out_dir;

  void add(CLI::App& app) {
    app.add_option("--n_users,--n-users", config.n_users)->capture_default_str();
    app.add_option("--n_pois,--n-pois", config.n_pois)->capture_default_str();
    app.add_option("--n_clusters,--n-clusters", config.n_clusters)->capture_default_str();
    app.add_option("--records_per_user,--records-per-user", config.records_per_user)->capture_default_str();
    app.add_option("--seed", config.seed)->capture_default_str();
    app.add_option("--weeks", config.weeks)->capture_default_str();
    app.add_option("--cluster_poi_affinity,--cluster-poi-affinity", config.cluster_poi_affinity)
        ->capture_default_str();
    app.add_option("--temporal_sharpness,--temporal-sharpness", config.temporal_sharpness)
        ->capture_default_str();
    app.add_option("--censored_records_per_user,--censored-records-per-user",
                   config.censored_records_per_user, "0 disables the cold-start file")
        ->capture_default_str();
    app.add_option("--out", out_dir, "output directory")->required();
  }

  void run(const CLI::App& app) const {
    config.validate();
    RunManifest manifest("gen");
    record_options(app, manifest.config());
    manifest.set_seed(config.seed);
    const fs::path dir(out_dir);
    Population pop;
    GeneratedData data;
    {
      RunManifest::Stage s(manifest, "generate");
      pop = gen_population(config);
      data = gen_checkins(config, pop);
    }
    RunManifest::Stage s(manifest, "write");
    const auto checkins = data.checkins.to_checkins();
    const auto censored = data.censored.to_checkins();
    const std::vector<std::pair<fs::path, std::function<void(std::ostream&)>>> files = {
        {dir / "checkins.csv", [&](std::ostream& o) { write_checkins(o, checkins); }},
        {dir / "venues.csv", [&](std::ostream& o) { write_venues(o, pop.venues); }},
        {dir / "truth.csv", [&](std::ostream& o) { write_truth(o, pop); }},
        {dir / "censored.csv", [&](std::ostream& o) { write_checkins(o, censored); }},
    };
    for (const auto& [path, writer] : files) {
      write_atomically(path, writer);
      manifest.add_output(path);
    }
    manifest.write(dir / "manifest.json");
  }
};

struct GraphCmd {
  DataArgs data;
  std::string out;
  double train_frac = 0.8;
  bool full = false;
  std::string time_mode = "28";
  bool poi_poi = false;
  double window_hours = 4.0;

  void add(CLI::App& app) {
    data.add(app);
    app.add_option("--out", out, "graph file")->required();
    app.add_option("--train-frac,--train_frac", train_frac, "chronological train share per user")
        ->capture_default_str();
    app.add_flag("--full", full, "build from every record instead of the train split");
    app.add_option("--time-mode,--time_mode", time_mode, "28, hour4 or dow7")
        ->check(CLI::IsMember(kTimeModes))
        ->capture_default_str();
    app.add_flag("--poi-poi,--poi_poi", poi_poi, "include POI-POI transitions");
    app.add_option("--window-hours,--window_hours", window_hours, "transition window")
        ->capture_default_str();
  }

  void run(const CLI::App& app) const {
    RunManifest manifest("graph");
    record_options(app, manifest.config());
    HeteroGraph g;
    {
      RunManifest::Stage s(manifest, "ingest");
      const Dataset all = data.load(manifest);
      RunManifest::Stage b(manifest, "build");
      const Dataset train = full ? all : split_chrono(all, train_frac).train;
      g = build_hetero(train, *parse_time_mode(time_mode));
      if (poi_poi) g.poi_poi = add_poi_poi(train, window_hours);
    }
    {
      RunManifest::Stage s(manifest, "write");
      write_atomically(out, [&](std::ostream& o) { write_graph(o, g); });
    }
    manifest.add_output(out);
    manifest.write(manifest_next_to(out));
  }
};

struct TrainCmd {
  TrainArgs train;
  std::string graph;
  std::string out;
  std::string loss_curve;

  void add(CLI::App& app) {
    app.add_option("--graph", graph, "graph file")->required();
    app.add_option("--out", out, "embedding file")->required();
    app.add_option("--loss-curve,--loss_curve", loss_curve, "optional CSV of step,loss");
    train.add(app);
  }

  void run(const CLI::App& app) const {
    const TrainConfig config = train.resolved();
    RunManifest manifest("train");
    record_options(app, manifest.config());
    manifest.set_seed(config.seed);
    manifest.add_input("graph", graph);
    HeteroGraph g;
    {
      RunManifest::Stage s(manifest, "load");
      g = load_graph(graph);
    }
    if (config.variant == Variant::EdhgPoi && !g.poi_poi) {
      throw ValidationError("variant edhg-poi needs a graph built with --poi-poi");
    }
    TrainResult result;
    {
      RunManifest::Stage s(manifest, "train");
      result = joint_train(g, config);
    }
    {
      RunManifest::Stage s(manifest, "write");
      write_atomically(out, [&](std::ostream& o) { write_embeddings(o, result.store); });
      if (!loss_curve.empty()) {
        write_atomically(loss_curve, [&](std::ostream& o) {
          o << "step,loss\n";
          for (const auto& p : result.loss_curve) o << fmt::format("{},{:.9g}\n", p.step, p.estimate);
        });
      }
    }
    manifest.add_output(out);
    if (!loss_curve.empty()) manifest.add_output(loss_curve);
    manifest.config()["final_loss"] = result.final_loss;
    manifest.write(manifest_next_to(out));
  }
};

struct PredictCmd {
  std::string graph;
  std::string embeddings;
  std::string queries;
  std::size_t k = 10;
  std::string out;

  void add(CLI::App& app) {
    app.add_option("--graph", graph, "graph file, for id lookup")->required();
    app.add_option("--embeddings", embeddings, "embedding file")->required();
    app.add_option("--queries", queries, "CSV of user_id,timestamp")->required();
    app.add_option("--k", k, "POIs per query")->capture_default_str();
    app.add_option("--out", out, "prediction CSV")->required();
  }

  void run(const CLI::App& app) const {
    RunManifest manifest("predict");
    record_options(app, manifest.config());
    manifest.add_input("graph", graph);
    manifest.add_input("embeddings", embeddings);
    manifest.add_input("queries", queries);
    const HeteroGraph g = load_graph(graph);
    const EmbeddingStore store = load_embeddings(embeddings);
    check_store_matches(store, g);
    const auto rows = read_table(queries, {"user_id", "timestamp"});
    if (k < 1 || k > g.count(NodeKind::Poi)) {
      throw ValidationError(fmt::format("--k must be in [1, {}]", g.count(NodeKind::Poi)));
    }
    const auto users = index_of(g.user_ids);
    std::ostringstream body;
    body << "user_id,timestamp,rank,poi_id,score\n";
    {
      RunManifest::Stage s(manifest, "predict");
      for (const auto& row : rows) {
        const auto u = users.find(row[0]);
        if (u == users.end()) throw ValidationError(fmt::format("unknown user '{}'", row[0]));
        const auto ts = parse_timestamp(row[1]);
        if (!ts) throw ValidationError(fmt::format("bad timestamp '{}'", row[1]));
        const auto ranked = top_k_pois(store, Query{u->second, *ts}, g.time_mode, k);
        for (std::size_t r = 0; r < ranked.size(); ++r) {
          body << fmt::format("{},{},{},{},{:.9g}\n", row[0], row[1], r + 1, g.poi_ids[ranked[r].index],
                              ranked[r].score);
        }
      }
    }
    const auto text = body.str();
    write_atomically(out, [&](std::ostream& o) { o << text; });
    manifest.add_output(out);
    manifest.write(manifest_next_to(out));
  }
};

struct FriendsCmd {
  std::string graph;
  std::string embeddings;
  std::string users;
  std::size_t k = 10;
  std::string out;

  void add(CLI::App& app) {
    app.add_option("--graph", graph, "graph file, for id lookup")->required();
    app.add_option("--embeddings", embeddings, "embedding file")->required();
    app.add_option("--users", users, "CSV with a user_id column")->required();
    app.add_option("--k", k, "suggestions per user")->capture_default_str();
    app.add_option("--out", out, "suggestion CSV")->required();
  }

  void run(const CLI::App& app) const {
    RunManifest manifest("friends");
    record_options(app, manifest.config());
    manifest.add_input("graph", graph);
    manifest.add_input("embeddings", embeddings);
    manifest.add_input("users", users);
    const HeteroGraph g = load_graph(graph);
    const EmbeddingStore store = load_embeddings(embeddings);
    check_store_matches(store, g);
    const auto rows = read_table(users, {"user_id"});
    if (k < 1) throw ValidationError("--k must be positive");
    const auto index = index_of(g.user_ids);
    std::ostringstream body;
    body << "user_id,rank,friend_id,score\n";
    {
      RunManifest::Stage s(manifest, "friends");
      for (const auto& row : rows) {
        const auto u = index.find(row[0]);
        if (u == index.end()) throw ValidationError(fmt::format("unknown user '{}'", row[0]));
        const auto ranked = rank_top_k(friend_scores(store, u->second), k);
        for (std::size_t r = 0; r < ranked.size(); ++r) {
          body << fmt::format("{},{},{},{:.9g}\n", row[0], r + 1, g.user_ids[ranked[r].index], ranked[r].score);
        }
      }
    }
    const auto text = body.str();
    write_atomically(out, [&](std::ostream& o) { o << text; });
    manifest.add_output(out);
    manifest.write(manifest_next_to(out));
  }
};

// Interns supplementary records into an existing universe, dropping users
// that did not survive filtering.
Dataset intern_into(const Dataset& base, std::span<const CheckIn> records) {
  std::vector<Record> out;
  for (const auto& c : records) {
    const auto u = base.user_index(c.user_id);
    if (!u) continue;
    const auto b = base.poi_index(c.poi_id);
    if (!b) throw ValidationError(fmt::format("censored record at unknown POI '{}'", c.poi_id));
    out.push_back({*u, *b, c.timestamp});
  }
  return Dataset(base.users(), base.venues(), std::move(out));
}

struct EvalCmd {
  DataArgs data;
  TrainArgs train;
  std::string graph;
  std::string embeddings;
  std::string censored;
  std::vector<std::size_t> ks = kDefaultKs;
  double train_frac = 0.8;
  bool nbc = false;
  std::size_t active = 100;
  std::vector<double> fractions;
  std::string out_dir;

  void add(CLI::App& app) {
    data.add(app);
    app.add_option("--graph", graph, "graph built from the train split")->required();
    app.add_option("--embeddings", embeddings, "embedding file")->required();
    app.add_option("--censored", censored, "cold-start check-in CSV");
    app.add_option("--ks", ks, "cutoffs")->delimiter(',')->capture_default_str();
    app.add_option("--train-frac,--train_frac", train_frac)->capture_default_str();
    app.add_flag("--nbc", nbc, "also score the naive Bayes baseline");
    app.add_option("--active", active, "active users for friend MRR, 0 skips it")->capture_default_str();
    app.add_option("--fractions", fractions, "learning-curve fractions; retrains per fraction")
        ->delimiter(',');
    app.add_option("--window-hours,--window_hours", train.window_hours,
                   "transition window for learning-curve retraining")
        ->capture_default_str();
    app.add_option("--out-dir,--out_dir", out_dir, "report directory")->required();
    train.add(app);
  }

  void run(const CLI::App& app) const {
    RunManifest manifest("eval");
    record_options(app, manifest.config());
    manifest.add_input("graph", graph);
    manifest.add_input("embeddings", embeddings);
    if (ks.empty()) throw ValidationError("--ks is empty");
    for (auto k : ks) {
      if (k < 1) throw ValidationError("--ks entries must be positive");
    }
    std::vector<std::size_t> sorted_ks = ks;
    std::sort(sorted_ks.begin(), sorted_ks.end());
    sorted_ks.erase(std::unique(sorted_ks.begin(), sorted_ks.end()), sorted_ks.end());

    Dataset all;
    {
      RunManifest::Stage s(manifest, "ingest");
      all = data.load(manifest);
    }
    const HeteroGraph g = load_graph(graph);
    const EmbeddingStore store = load_embeddings(embeddings);
    check_store_matches(store, g);
    if (all.users() != g.user_ids) throw ValidationError("graph users differ from the filtered check-ins");
    for (std::size_t b = 0; b < all.poi_count(); ++b) {
      if (b >= g.poi_ids.size() || all.venues()[b].poi_id != g.poi_ids[b]) {
        throw ValidationError("graph POIs differ from the venue file");
      }
    }
    if (g.poi_ids.size() != all.poi_count()) throw ValidationError("graph POIs differ from the venue file");

    const Split split = split_chrono(all, train_frac);
    std::optional<Dataset> cold;
    if (!censored.empty()) {
      manifest.add_input("censored", censored);
      cold = intern_into(all, read_checkins(censored).records);
    }

    const fs::path dir(out_dir);
    std::vector<fs::path> written;
    const auto emit = [&](const fs::path& name, const std::function<void(std::ostream&)>& w) {
      write_atomically(dir / name, w);
      written.push_back(dir / name);
    };
    const auto emit_report = [&](const fs::path& name, const AccuracyReport& r) {
      emit(name, [&](std::ostream& o) { write_accuracy_csv(o, r); });
    };

    {
      RunManifest::Stage s(manifest, "accuracy");
      const Predictor p = embedding_predictor(store, g.time_mode);
      emit_report("accuracy.csv", accuracy_at_k(p, split, sorted_ks));
      if (cold) emit_report("accuracy_censored.csv", accuracy_at_k(p, split.train, *cold, sorted_ks));
    }
    if (nbc) {
      RunManifest::Stage s(manifest, "nbc");
      const NbcModel model = NbcModel::fit(split.train, g.time_mode);
      const Predictor p = nbc_predictor(model);
      emit_report("nbc_accuracy.csv", accuracy_at_k(p, split, sorted_ks));
      if (cold) emit_report("nbc_accuracy_censored.csv", accuracy_at_k(p, split.train, *cold, sorted_ks));
    }
    if (active > 0) {
      RunManifest::Stage s(manifest, "mrr");
      emit("mrr.csv", [&](std::ostream& o) { write_mrr(o, split.train, store); });
    }
    if (!fractions.empty()) {
      RunManifest::Stage s(manifest, "learning_curve");
      const TrainConfig config = train.resolved();
      manifest.set_seed(config.seed);
      const TrainFn fn = [&](const Dataset& subset) {
        HeteroGraph sub = build_hetero(subset, g.time_mode);
        ensure_poi_poi(sub, subset, config.variant, train.window_hours);
        auto result = std::make_shared<TrainResult>(joint_train(sub, config));
        const Predictor inner = embedding_predictor(result->store, g.time_mode);
        return Predictor([result, inner](std::uint32_t u, Timestamp t, std::size_t k) {
          return inner(u, t, k);
        });
      };
      const auto curve = learning_curve(split, fractions, fn, sorted_ks);
      emit("learning_curve.csv", [&](std::ostream& o) { write_learning_curve_csv(o, curve); });
    }
    for (const auto& p : written) manifest.add_output(p);
    manifest.write(dir / "manifest.json");
  }

  void write_mrr(std::ostream& o, const Dataset& tr, const EmbeddingStore& store) const {
    const std::size_t n_users = tr.user_count();
    if (n_users <= 10) throw ValidationError("friend MRR needs more than 10 users; pass --active 0");
    const auto act = active_users(tr, std::min(active, n_users));
    std::map<std::uint32_t, RankedList> suggestions;
    for (auto u : act) suggestions[u] = friend_scores(store, u);

    const CovisitMatrix cov = covisit(stays_per_user(tr));
    std::vector<std::vector<std::uint32_t>> rankings(n_users);
    for (std::uint32_t u = 0; u < n_users; ++u) rankings[u] = poi_ranking(tr, u);
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_covisit, by_location;
    for (auto u : act) {
      by_covisit[u] = covisit_friends(cov, n_users, u, 10);
      by_location[u] = location_friends(rankings, u, 10);
    }
    o << "proxy,n_active,mrr\n";
    o << fmt::format("covisit,{},{:.9g}\n", act.size(), mrr(suggestions, by_covisit, act));
    o << fmt::format("location,{},{:.9g}\n", act.size(), mrr(suggestions, by_location, act));
  }
};

struct CovisitCmd {
  DataArgs data;
  int gap_minutes = 10;
  std::string out;

  void add(CLI::App& app) {
    data.add(app);
    app.add_option("--gap-minutes,--gap_minutes", gap_minutes, "stay merge gap")->capture_default_str();
    app.add_option("--out", out, "covisit CSV")->required();
  }

  void run(const CLI::App& app) const {
    RunManifest manifest("covisit");
    record_options(app, manifest.config());
    if (gap_minutes < 0) throw ValidationError("--gap-minutes must be non-negative");
    const Dataset all = data.load(manifest);
    CovisitMatrix m;
    {
      RunManifest::Stage s(manifest, "covisit");
      m = covisit(stays_per_user(all, gap_minutes));
    }
    const auto pairs = m.pairs();
    write_atomically(out, [&](std::ostream& o) {
      o << "user_a,user_b,minutes\n";
      for (const auto& [u, v, minutes] : pairs) {
        o << all.users()[u] << ',' << all.users()[v] << ',' << minutes << '\n';
      }
    });
    manifest.add_output(out);
    manifest.write(manifest_next_to(out));
  }
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app("Heterogeneous graph embeddings for campus check-in data", "edhg");
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  GenCmd gen;
  GraphCmd graph;
  TrainCmd train;
  PredictCmd predict;
  FriendsCmd friends;
  EvalCmd eval;
  CovisitCmd covisit_cmd;

  auto* c_gen = app.add_subcommand("gen", "generate a synthetic check-in benchmark");
  auto* c_graph = app.add_subcommand("graph", "build the heterogeneous graph from check-ins");
  auto* c_train = app.add_subcommand("train", "train node embeddings on a graph file");
  auto* c_predict = app.add_subcommand("predict", "top-k POIs for (user, time) queries");
  auto* c_friends = app.add_subcommand("friends", "friend suggestions by embedding similarity");
  auto* c_eval = app.add_subcommand("eval", "accuracy@k, baselines, MRR and learning curves");
  auto* c_covisit = app.add_subcommand("covisit", "pairwise co-visitation minutes");
  gen.add(*c_gen);
  graph.add(*c_graph);
  train.add(*c_train);
  predict.add(*c_predict);
  friends.add(*c_friends);
  eval.add(*c_eval);
  covisit_cmd.add(*c_covisit);

  std::vector<std::string> rev(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rev.begin(), rev.end());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return 1;
  }

  try {
    if (c_gen->parsed()) gen.run(*c_gen);
    else if (c_graph->parsed()) graph.run(*c_graph);
    else if (c_train->parsed()) train.run(*c_train);
    else if (c_predict->parsed()) predict.run(*c_predict);
    else if (c_friends->parsed()) friends.run(*c_friends);
    else if (c_eval->parsed()) eval.run(*c_eval);
    else if (c_covisit->parsed()) covisit_cmd.run(*c_covisit);
    return 0;
  } catch (const IoError& e) {
    err << "edhg: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "edhg: " << e.what() << '\n';
    return 2;
  } catch (const DivergenceError& e) {
    err << "edhg: " << e.what() << " at step " << e.step() << '\n';
    return 1;
  } catch (const std::exception& e) {
    // ValidationError and the std::logic_error family from contract checks.
    err << "edhg: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace edhg
