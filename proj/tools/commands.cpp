#include "commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <stdexcept>

#include "radarpr/eval.hpp"
#include "radarpr/pipeline.hpp"
#include "radarpr/retrieval.hpp"
#include "radarpr/synth.hpp"

namespace radarpr::cli {

namespace {

void write_manifest(const std::filesystem::path& path,
                    const std::string& command, const RunConfig& cfg,
                    nlohmann::ordered_json extra) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["config"] = run_config_to_json(cfg);
  for (auto& [k, v] : extra.items()) j[k] = v;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

double mean_of(const std::vector<QueryOutcome>& outcomes,
               double (*pick)(const QueryOutcome&)) {
  if (outcomes.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& o : outcomes) sum += pick(o);
  return sum / outcomes.size();
}

// Pipeline-shape keys: when any differs from the database sidecar, stored
// descriptors are stale for this run and get recomputed from the session.
bool pipeline_config_differs(const RunConfig& a, const RunConfig& b) {
  return a.descriptor_size != b.descriptor_size ||
         a.max_range != b.max_range ||
         a.binarize_threshold != b.binarize_threshold ||
         a.min_cluster_area != b.min_cluster_area ||
         a.samples_per_ellipse != b.samples_per_ellipse ||
         a.frame_stride != b.frame_stride;
}

std::map<std::int64_t, const FrameMeta*> meta_by_frame(const Session& s) {
  std::map<std::int64_t, const FrameMeta*> m;
  for (const FrameMeta& f : s.frames) m[f.frame_id] = &f;
  return m;
}

std::vector<EssDescriptor> ringkey_session_descriptors(const Session& session,
                                                       const RunConfig& cfg) {
  std::vector<EssDescriptor> out;
  for (std::size_t i = 0; i < session.frames.size();
       i += static_cast<std::size_t>(cfg.frame_stride)) {
    RadarFrame frame = load_session_frame(session, i);
    EssDescriptor d;
    d.v = ringkey_descriptor(frame, cfg.descriptor_size,
                             cfg.resolved_max_range(frame.width, frame.height),
                             cfg.binarize_threshold);
    d.cluster_count = 0;  // unused: the baseline queries with the gate off
    d.frame_id = frame.frame_id;
    d.session_id = session.session_id;
    out.push_back(std::move(d));
  }
  return out;
}

std::vector<FrameRef> make_refs(const std::vector<EssDescriptor>& descs,
                                const Session& session) {
  const auto metas = meta_by_frame(session);
  std::vector<FrameRef> refs;
  refs.reserve(descs.size());
  for (const EssDescriptor& d : descs) {
    FrameRef r;
    r.session_id = d.session_id;
    r.frame_id = d.frame_id;
    auto it = metas.find(d.frame_id);
    if (it != metas.end()) r.pose = it->second->pose;
    refs.push_back(std::move(r));
  }
  return refs;
}

struct Assertion {
  std::string metric;
  std::string op;
  double value = 0.0;
};

std::vector<Assertion> parse_asserts(const std::string& spec) {
  std::vector<Assertion> out;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    const std::string term = spec.substr(pos, end - pos);
    pos = end + 1;
    if (term.empty()) continue;
    static const char* ops[] = {">=", "<=", "==", ">", "<"};
    Assertion a;
    std::size_t op_at = std::string::npos;
    for (const char* op : ops) {
      op_at = term.find(op);
      if (op_at != std::string::npos) {
        a.op = op;
        break;
      }
    }
    if (op_at == std::string::npos) {
      throw std::invalid_argument("bad assert term '" + term + "'");
    }
    a.metric = term.substr(0, op_at);
    a.value = std::stod(term.substr(op_at + a.op.size()));
    out.push_back(std::move(a));
  }
  return out;
}

double metric_value(const SummaryRow& row, const std::string& name) {
  if (name == "pr_auc") return row.pr_auc;
  if (name == "roc_auc") return row.roc_auc;
  if (name == "f1_max") return row.f1_max;
  if (name == "recall_at_1") return row.recall_at_1;
  if (name == "mean_query_ms") return row.mean_query_ms;
  throw std::invalid_argument("unknown assert metric '" + name + "'");
}

bool check_assertion(const Assertion& a, double v) {
  if (a.op == ">=") return v >= a.value;
  if (a.op == "<=") return v <= a.value;
  if (a.op == ">") return v > a.value;
  if (a.op == "<") return v < a.value;
  return v == a.value;
}

// "name=v1,v2,v3" -> (name, values as strings)
std::pair<std::string, std::vector<std::string>> parse_axis(
    const std::string& spec) {
  const std::size_t eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 >= spec.size()) {
    throw std::invalid_argument("bad grid axis '" + spec +
                                "' (expected name=v1,v2,...)");
  }
  std::pair<std::string, std::vector<std::string>> out;
  out.first = spec.substr(0, eq);
  std::size_t pos = eq + 1;
  while (pos <= spec.size()) {
    std::size_t end = spec.find(',', pos);
    if (end == std::string::npos) end = spec.size();
    if (end > pos) out.second.push_back(spec.substr(pos, end - pos));
    pos = end + 1;
  }
  if (out.second.empty()) {
    throw std::invalid_argument("grid axis '" + spec + "' has no values");
  }
  return out;
}

nlohmann::json axis_value_as_json(const std::string& key,
                                  const std::string& value) {
  // RunConfig numeric fields are int or double; route by key.
  static const std::map<std::string, bool> is_double = {
      {"descriptor_size", false},    {"max_range", true},
      {"cluster_threshold", false},  {"verify_threshold", true},
      {"revisit_distance", true},    {"frame_stride", false},
      {"binarize_threshold", false}, {"min_cluster_area", false},
      {"samples_per_ellipse", false}, {"exclusion_window", false}};
  auto it = is_double.find(key);
  if (it == is_double.end()) {
    throw std::invalid_argument("unknown grid axis '" + key + "'");
  }
  if (it->second) return std::stod(value);
  return std::stoi(value);
}

struct EvalRun {
  SummaryRow summary;
  std::vector<CurvePoint> curve;
  double mean_candidates = 0.0;
  std::size_t tn_count = 0;
};

/// One full evaluation pass for one method under one resolved config.
EvalRun eval_once(const std::string& method, const RunConfig& cfg,
                  const RunConfig& sidecar_cfg,
                  const std::vector<EssDescriptor>& stored_db_desc,
                  const Session& db_session, const Session& query_session,
                  bool intra, const std::string& sequence_label) {
  // Database descriptors: reuse the stored set when the pipeline shape
  // matches; otherwise (or for the baseline) recompute from the session.
  std::vector<EssDescriptor> db_desc;
  if (method == "ringkey") {
    db_desc = ringkey_session_descriptors(db_session, cfg);
  } else if (pipeline_config_differs(cfg, sidecar_cfg)) {
    db_desc = index_session(db_session, cfg).descriptors;
  } else {
    db_desc = stored_db_desc;
  }

  std::vector<EssDescriptor> query_desc;
  if (intra) {
    query_desc = db_desc;
  } else if (method == "ringkey") {
    query_desc = ringkey_session_descriptors(query_session, cfg);
  } else {
    query_desc = index_session(query_session, cfg).descriptors;
  }

  DescriptorDb db(cfg.descriptor_size);
  for (const EssDescriptor& d : db_desc) db.insert(d);

  EvalConfig ecfg;
  ecfg.revisit_distance = cfg.revisit_distance;
  ecfg.frame_stride = cfg.frame_stride;
  ecfg.mode = intra ? EvalMode::kIntra : EvalMode::kInter;
  ecfg.exclusion_window = cfg.exclusion_window;

  const std::vector<FrameRef> db_refs = make_refs(db_desc, db_session);
  const std::vector<FrameRef> query_refs = make_refs(query_desc, query_session);
  const GroundTruth gt = build_ground_truth(query_refs, db_refs, ecfg);

  std::vector<std::optional<ExclusionWindow>> exclusions;
  if (intra) {
    exclusions.reserve(query_desc.size());
    for (const EssDescriptor& q : query_desc) {
      exclusions.push_back(ExclusionWindow{query_session.session_id,
                                           q.frame_id, cfg.exclusion_window});
    }
  }

  const int p = method == "ringkey" ? std::numeric_limits<int>::max()
                                    : cfg.cluster_threshold;
  // Sweep thresholds offline, so accept every nearest neighbor here.
  const auto outcomes = run_queries(db, query_desc, p, 1.0, exclusions);

  std::vector<MatchRecord> matches;
  matches.reserve(outcomes.size());
  for (const QueryOutcome& o : outcomes) matches.push_back(o.match);

  EvalRun run;
  run.tn_count = tn_capacity(gt);
  run.curve = sweep(matches, gt, default_threshold_grid());
  run.summary.method = method;
  run.summary.sequence = sequence_label;
  run.summary.pr_auc = auc(run.curve, CurveAxis::kPr);
  run.summary.roc_auc = auc(run.curve, CurveAxis::kRoc);
  run.summary.f1_max = 0.0;
  for (const CurvePoint& pt : run.curve) {
    run.summary.f1_max = std::max(run.summary.f1_max, pt.f1);
  }
  try {
    run.summary.recall_at_1 = recall_at_1(matches, gt);
  } catch (const std::invalid_argument&) {
    std::cerr << "warning: no query has a reachable positive; recall@1 "
                 "undefined, reported as 0\n";
    run.summary.recall_at_1 = 0.0;
  }
  run.summary.mean_query_ms =
      mean_of(outcomes, [](const QueryOutcome& o) { return o.query_ms; });
  run.mean_candidates = mean_of(outcomes, [](const QueryOutcome& o) {
    return static_cast<double>(o.candidates_examined);
  });
  return run;
}

std::string sanitize_for_filename(std::string s) {
  for (char& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') {
      c = '_';
    }
  }
  return s;
}

int run_eval_grid(const std::filesystem::path& db_path,
                  const std::filesystem::path& query_session_dir,
                  const EvalOptions& opts, const ConfigPatch& patch,
                  const std::vector<std::pair<std::string, std::vector<std::string>>>& axes) {
  auto [db, sidecar_cfg] = DescriptorDb::load(db_path);
  RunConfig base_cfg = run_config_from_json(patch, sidecar_cfg);

  if (sidecar_cfg.session_dir.empty()) {
    throw std::runtime_error("database sidecar lacks session_dir");
  }
  const Session db_session = load_session(sidecar_cfg.session_dir);
  const Session query_session = load_session(query_session_dir);

  bool intra;
  if (opts.mode == "intra") {
    intra = true;
  } else if (opts.mode == "inter") {
    intra = false;
  } else if (opts.mode == "auto") {
    intra = std::filesystem::weakly_canonical(query_session_dir) ==
            std::filesystem::weakly_canonical(sidecar_cfg.session_dir);
  } else {
    throw std::invalid_argument("mode must be intra, inter, or auto");
  }
  if (intra && std::filesystem::weakly_canonical(query_session_dir) !=
                   std::filesystem::weakly_canonical(sidecar_cfg.session_dir)) {
    throw std::invalid_argument(
        "intra mode requires the query session to be the indexed session");
  }

  std::vector<EssDescriptor> stored;
  stored.reserve(db.size());
  for (std::size_t i = 0; i < db.size(); ++i) stored.push_back(db.at(i));

  const auto assertions = parse_asserts(opts.asserts);
  std::filesystem::create_directories(opts.out_dir);

  // Cartesian product over axis values; the empty grid runs once.
  std::vector<std::map<std::string, std::string>> combos{{}};
  for (const auto& [name, values] : axes) {
    std::vector<std::map<std::string, std::string>> next;
    for (const auto& combo : combos) {
      for (const std::string& v : values) {
        auto c = combo;
        c[name] = v;
        next.push_back(std::move(c));
      }
    }
    combos = std::move(next);
  }

  std::vector<SummaryRow> rows;
  bool all_pass = true;
  for (const auto& combo : combos) {
    RunConfig cfg = base_cfg;
    std::string label = query_session.session_id;
    if (!combo.empty()) {
      nlohmann::json override_json;
      for (const auto& [k, v] : combo) {
        override_json[k] = axis_value_as_json(k, v);
        label += ";" + k + "=" + v;
      }
      cfg = run_config_from_json(override_json, cfg);
    }
    for (const std::string& method : opts.methods) {
      EvalRun run = eval_once(method, cfg, sidecar_cfg, stored, db_session,
                              query_session, intra, label);
      if (run.tn_count < 10) {
        std::cerr << "warning: only " << run.tn_count
                  << " queries lack positives; ROC-AUC is uninformative in "
                     "this regime\n";
      }
      const auto curve_name = "curve_" + sanitize_for_filename(method) + "_" +
                              sanitize_for_filename(label) + ".csv";
      write_curve_csv(opts.out_dir / curve_name, run.curve);
      std::printf(
          "%s %s: pr_auc=%.4f roc_auc=%.4f f1_max=%.4f recall@1=%.4f "
          "mean_query_ms=%.4f mean_candidates=%.1f\n",
          method.c_str(), label.c_str(), run.summary.pr_auc,
          run.summary.roc_auc, run.summary.f1_max, run.summary.recall_at_1,
          run.summary.mean_query_ms, run.mean_candidates);
      for (const Assertion& a : assertions) {
        const double v = metric_value(run.summary, a.metric);
        if (!check_assertion(a, v)) {
          std::cerr << "assert failed: " << a.metric << a.op << a.value
                    << " (actual " << v << ", method " << method << ", "
                    << label << ")\n";
          all_pass = false;
        }
      }
      rows.push_back(std::move(run.summary));
    }
  }

  write_summary_csv(opts.out_dir / "summary.csv", rows);
  write_manifest(opts.out_dir / "manifest.json", "eval", base_cfg,
                 {{"db", db_path.string()},
                  {"query_session", query_session_dir.string()},
                  {"mode", intra ? "intra" : "inter"},
                  {"rows", rows.size()}});
  return all_pass ? 0 : 1;
}

}  // namespace

int cmd_index(const std::filesystem::path& session_dir,
              const std::filesystem::path& out_db, const ConfigPatch& patch) {
  RunConfig cfg = run_config_from_json(patch, RunConfig{});
  cfg.session_dir = session_dir.string();
  const Session session = load_session(session_dir);
  IndexResult result = index_session(session, cfg);

  DescriptorDb db(cfg.descriptor_size);
  for (EssDescriptor& d : result.descriptors) db.insert(std::move(d));
  if (out_db.has_parent_path()) {
    std::filesystem::create_directories(out_db.parent_path());
  }
  db.save(out_db, cfg);

  const std::size_t n = db.size();
  std::printf("indexed %zu frames (stride %d) -> %s\n", n, cfg.frame_stride,
              out_db.string().c_str());
  std::printf("mean per-frame descriptor time: %.3f ms\n",
              n ? result.describe_ms_total / n : 0.0);
  write_manifest(out_db.string() + ".manifest.json", "index", cfg,
                 {{"session", session_dir.string()},
                  {"db", out_db.string()},
                  {"frames", n}});
  return 0;
}

int cmd_query(const std::filesystem::path& db_path,
              const std::optional<std::filesystem::path>& image,
              const std::optional<std::filesystem::path>& session_dir,
              std::optional<std::int64_t> frame_id, const ConfigPatch& patch) {
  auto [db, sidecar_cfg] = DescriptorDb::load(db_path);
  const RunConfig cfg = run_config_from_json(patch, sidecar_cfg);

  RadarFrame frame;
  if (image) {
    FrameMeta meta;
    frame = load_frame(*image, meta);
  } else if (session_dir && frame_id) {
    const Session s = load_session(*session_dir);
    auto it = std::find_if(s.frames.begin(), s.frames.end(),
                           [&](const FrameMeta& m) {
                             return m.frame_id == *frame_id;
                           });
    if (it == s.frames.end()) {
      throw std::runtime_error("frame " + std::to_string(*frame_id) +
                               " not in session metadata");
    }
    frame = load_session_frame(s, static_cast<std::size_t>(
                                      std::distance(s.frames.begin(), it)));
  } else {
    throw std::invalid_argument(
        "query needs --image or --session plus --frame");
  }

  const EssDescriptor q = describe_frame(frame, cfg);
  const MatchResult r =
      db.query(q, cfg.cluster_threshold, cfg.verify_threshold, std::nullopt);
  if (r.matched) {
    std::printf("match: yes session=%s frame=%lld distance=%.6f "
                "candidates=%zu\n",
                r.candidate->first.c_str(),
                static_cast<long long>(r.candidate->second), r.distance,
                r.candidates_examined);
  } else if (r.candidate) {
    std::printf("match: no (nearest session=%s frame=%lld distance=%.6f > "
                "threshold %.6f) candidates=%zu\n",
                r.candidate->first.c_str(),
                static_cast<long long>(r.candidate->second), r.distance,
                cfg.verify_threshold, r.candidates_examined);
  } else {
    std::printf("match: no (no candidate) candidates=%zu\n",
                r.candidates_examined);
  }
  return 0;
}

int cmd_eval(const std::filesystem::path& db_path,
             const std::filesystem::path& query_session_dir,
             const EvalOptions& opts, const ConfigPatch& patch) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  if (!opts.grid.empty()) axes.push_back(parse_axis(opts.grid));
  return run_eval_grid(db_path, query_session_dir, opts, patch, axes);
}

int cmd_synth(const SynthOptions& opts) {
  SynthPreset preset;
  std::string label;
  if (!opts.preset.empty()) {
    preset = make_preset(opts.preset);
    label = opts.preset;
  } else {
    if (!opts.scene_file || opts.trajectory_files.empty()) {
      throw std::invalid_argument(
          "synth needs --preset or --scene plus --trajectory");
    }
    preset.scene = load_scene(*opts.scene_file);
    for (const auto& tf : opts.trajectory_files) {
      preset.trajectories.push_back(load_trajectory(tf));
    }
    label = "custom";
  }
  if (opts.width > 0) preset.render.width = opts.width;
  if (opts.height > 0) preset.render.height = opts.height;
  if (opts.resolution > 0.0) preset.render.resolution = opts.resolution;

  const std::uint64_t seed = opts.seed ? opts.seed : kDefaultSynthSeed;
  std::filesystem::create_directories(opts.out_dir);
  save_scene(opts.out_dir / "scene.json", preset.scene);

  nlohmann::ordered_json sessions = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < preset.trajectories.size(); ++k) {
    const auto session_dir = opts.out_dir / ("s" + std::to_string(k));
    save_trajectory(opts.out_dir / ("trajectory_s" + std::to_string(k) + ".json"),
                    preset.trajectories[k]);
    const auto frames =
        make_loop_sequence(preset.scene, preset.trajectories[k], preset.render, seed);
    write_session(session_dir, frames);
    std::printf("wrote %zu frames -> %s\n", frames.size(),
                session_dir.string().c_str());
    sessions.push_back(session_dir.string());
  }

  RunConfig cfg;  // synth has no pipeline config; record geometry instead
  write_manifest(opts.out_dir / "manifest.json", "synth", cfg,
                 {{"preset", label},
                  {"seed", seed},
                  {"width", preset.render.width},
                  {"height", preset.render.height},
                  {"resolution", preset.render.resolution},
                  {"sessions", sessions}});
  return 0;
}

int cmd_sweep(const std::filesystem::path& db_path,
              const std::filesystem::path& query_session_dir,
              const SweepOptions& opts, const ConfigPatch& patch) {
  std::vector<std::pair<std::string, std::vector<std::string>>> axes;
  for (const std::string& spec : opts.axes) {
    axes.push_back(parse_axis(spec));
  }
  if (axes.empty()) {
    throw std::invalid_argument("sweep needs at least one --axis name=v1,v2,...");
  }
  return run_eval_grid(db_path, query_session_dir, opts.eval, patch, axes);
}

}  // namespace radarpr::cli
