// Copyright 2026 The HazardBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "core/orchestrator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "core/error.hpp"
#include "core/seeding.hpp"

namespace hb {

namespace fs = std::filesystem;

namespace {

ImageDims dims_of(const Raster& r) { return {r.width, r.height}; }

std::string_view as_view(const PngBytes& bytes) {
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

// Mean absolute per-channel deviation over pixels outside `mask`, in [0, 1].
double outside_mask_deviation(const Raster& before, const Raster& after, const Raster& mask) {
  std::uint64_t sum = 0;
  std::uint64_t count = 0;
  for (int row = 0; row < before.height; ++row) {
    for (int x = 0; x < before.width; ++x) {
      if (mask.px(x, row)[0] >= 128) continue;
      const std::uint8_t* a = before.px(x, row);
      const std::uint8_t* b = after.px(x, row);
      for (int c = 0; c < 3; ++c) sum += static_cast<std::uint64_t>(std::abs(a[c] - b[c]));
      count += 3;
    }
  }
  return count == 0 ? 0.0 : static_cast<double>(sum) / (255.0 * static_cast<double>(count));
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string error_text(const Error& e) {
  return std::string(error_code_name(e.code())) + ": " + e.what();
}

RecordStatus status_for(int accepted, int rejected) {
  if (rejected == 0 && accepted > 0) return RecordStatus::kSuccess;
  if (accepted > 0) return RecordStatus::kPartialFailure;
  return RecordStatus::kFailed;
}

}  // namespace

StepOutcome run_step(const Raster& current, const EditStep& step, std::size_t step_index,
                     Editor& editor, Judge& judge, int max_trials, std::uint64_t item_seed) {
  if (max_trials < 1) throw Error(ErrorCode::kConfiguration, "max trials must be at least 1");
  const Raster input = to_rgb(current);
  const ImageDims dims = dims_of(input);

  StepOutcome out;
  out.image = input;
  out.record.prompt = effective_prompt(step);
  out.record.mask = step.mask;
  out.record.mode = step.mode;
  out.record.orientation = step.orientation;
  out.record.pad = step.pad;
  const Direction wanted = judge_direction_for(step.orientation);
  const PngBytes input_png = encode_png(input);

  for (int t = 0; t < max_trials; ++t) {
    TrialRecord trial;
    trial.seed = derive_trial_seed(item_seed, step_index, static_cast<std::uint64_t>(t));
    ++out.record.trials_used;
    try {
      Raster before = input;
      PngBytes before_png = input_png;
      if (step.mode == EditMode::kIntrusion) {
        if (!step.pad) throw Error(ErrorCode::kConfiguration, "intrusion step without a pad");
        before_png = editor.outpaint(OutpaintRequest{input_png, step.pad->side, step.pad->pixels});
        before = to_rgb(decode_png(before_png));
        if (before.width != dims.width + step.pad->pixels || before.height != dims.height) {
          throw Error(ErrorCode::kDimMismatch,
                      "outpaint returned " + std::to_string(before.width) + "x" +
                          std::to_string(before.height) + ", expected " +
                          std::to_string(dims.width + step.pad->pixels) + "x" +
                          std::to_string(dims.height));
        }
      }
      const Raster mask = rasterize_mask(step.mask, before.width, before.height);

      EditRequest req;
      req.image = before_png;
      req.mask = encode_png(mask);
      req.prompt = out.record.prompt;
      req.seed = trial.seed;
      req.trial_index = t;
      const Raster after = to_rgb(decode_png(editor.edit(req)));
      if (dims_of(after) != dims_of(before)) {
        throw Error(ErrorCode::kDimMismatch, "editor changed the image size");
      }

      const PngBytes crop_before = encode_png(crop_to_mask(before, step.mask));
      const PngBytes crop_after = encode_png(crop_to_mask(after, step.mask));
      const auto completeness = judge.check_completeness(crop_before, crop_after);
      trial.completeness = completeness.value;
      trial.judge_raw.push_back(completeness.raw);
      if (completeness.value == Completeness::kComplete) {
        const auto direction = judge.check_direction(crop_after);
        trial.direction = direction.value;
        trial.judge_raw.push_back(direction.raw);
        trial.accepted = direction.value == wanted;
      }

      if (trial.accepted) {
        if (outside_mask_deviation(before, after, mask) > kOutsideMaskTolerance) {
          ++out.outside_mask_warnings;
        }
        if (step.mode == EditMode::kIntrusion) {
          const MaskRegion window = crop_after_pad(dims, dims_of(after), *step.pad);
          out.image = crop_to_mask(after, window);
        } else {
          out.image = after;
        }
        out.record.accepted = true;
        out.record.trials.push_back(std::move(trial));
        break;
      }
    } catch (const Error& e) {
      if (!e.retryable()) throw;
      trial.error = error_text(e);
    }
    out.record.trials.push_back(std::move(trial));
  }
  return out;
}

PlanOutcome run_plan(const BenchItem& item, const EditPlan& plan, const Raster& source,
                     const Backends& backends, int max_trials, std::uint64_t item_seed) {
  PlanOutcome out;
  GenerationRecord& rec = out.record;
  rec.id = record_id(item.item_id, plan.scenario, plan.category);
  rec.item_id = item.item_id;
  rec.scenario = plan.scenario;
  rec.category = plan.category;
  rec.gt_action = item.gt_action;
  rec.source = item.source;
  rec.question = item.question;
  rec.source_image = item.image_ref;
  rec.seed = item_seed;

  Judge judge(backends.judge);
  Raster image = to_rgb(source);
  int accepted = 0;
  int rejected = 0;
  try {
    if (dims_of(image) != plan.dims) {
      throw Error(ErrorCode::kFrameMismatch, "plan dimensions do not match the source image");
    }
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      StepOutcome step =
          run_step(image, plan.steps[i], i, *backends.editor, judge, max_trials, item_seed);
      rec.outside_mask_warnings += step.outside_mask_warnings;
      if (step.record.accepted) {
        ++accepted;
        image = std::move(step.image);
      } else {
        ++rejected;
      }
      rec.steps.push_back(std::move(step.record));
    }
    rec.status = status_for(accepted, rejected);
  } catch (const Error& e) {
    rec.error = error_text(e);
    rec.status = RecordStatus::kFailed;
  }
  out.image = std::move(image);
  return out;
}

int GenerateSummary::exit_code() const {
  if (success > 0) return 0;
  return (success + partial_failure + failed) == 0 ? 0 : 2;
}

GeometryConfig resolve_geometry(const GeometryConfig& overrides, const ImageDims& dims) {
  GeometryConfig cfg = GeometryConfig::defaults_for(dims);
  if (overrides.intrusion_half_width > 0) cfg.intrusion_half_width = overrides.intrusion_half_width;
  if (overrides.pad_width > 0) cfg.pad_width = overrides.pad_width;
  if (overrides.distance_band > 0.0) cfg.distance_band = overrides.distance_band;
  return cfg;
}

namespace {

void check_geometry_overrides(const GeometryConfig& g) {
  if (g.intrusion_half_width < 0 || g.pad_width < 0 || g.distance_band < 0.0) {
    throw Error(ErrorCode::kConfiguration, "geometry overrides must not be negative");
  }
  if (g.distance_band > 1.0) {
    throw Error(ErrorCode::kConfiguration, "distance band d must lie in (0, 1]");
  }
  if (g.intrusion_half_width > 0 && g.pad_width > 0 && g.pad_width <= g.intrusion_half_width) {
    throw Error(ErrorCode::kConfiguration,
                "pad width r must exceed intrusion half-width l (r=" +
                    std::to_string(g.pad_width) + ", l=" +
                    std::to_string(g.intrusion_half_width) + ")");
  }
}

struct Job {
  ScenarioKind scenario;
  ObjectCategory category;
};

class Generator {
 public:
  Generator(const std::string& source_manifest, const std::string& out_dir,
            const Backends& backends, const GenerateOptions& options)
      : out_dir_(out_dir), backends_(backends), options_(options) {
    check_geometry_overrides(options.geometry);
    if (options.max_trials < 1) {
      throw Error(ErrorCode::kConfiguration, "max trials must be at least 1");
    }
    if (!backends.editor || !backends.judge) {
      throw Error(ErrorCode::kConfiguration, "editor and judge backends are required");
    }
    items_ = read_source_manifest(source_manifest);
    std::sort(items_.begin(), items_.end(),
              [](const BenchItem& a, const BenchItem& b) { return a.item_id < b.item_id; });
    source_dir_ = fs::path(source_manifest).parent_path();
    std::error_code ec;
    fs::create_directories(out_dir_ / "images", ec);
    if (ec) throw Error(ErrorCode::kIo, "cannot create " + (out_dir_ / "images").string());
    records_path_ = (out_dir_ / "records.jsonl").string();
    if (fs::exists(records_path_)) {
      for (auto& rec : read_records(records_path_)) {
        std::string id = rec.id;
        existing_[id] = std::move(rec);
      }
    }
    build_jobs();
  }

  GenerateSummary run() {
    append_.open(records_path_, std::ios::binary | std::ios::app);
    if (!append_) throw Error(ErrorCode::kIo, "cannot write " + records_path_);

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    auto worker = [&] {
      for (;;) {
        if (stopped()) return;
        const std::size_t i = next++;
        if (i >= items_.size()) return;
        try {
          process_item(items_[i]);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
        }
      }
    };
    const int width = std::max(1, std::min<int>(options_.workers, static_cast<int>(items_.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < width; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    append_.close();
    if (failure) std::rethrow_exception(failure);

    summary_.interrupted = stopped();
    finalize();
    return summary_;
  }

 private:
  bool stopped() const { return options_.stop && options_.stop->load(); }

  void log(const std::string& msg) {
    if (!options_.log) return;
    std::lock_guard lock(log_mu_);
    options_.log(msg);
  }

  void build_jobs() {
    std::set<std::pair<int, int>> seen;
    for (ScenarioKind s : options_.scenarios) {
      for (ObjectCategory c : options_.categories) {
        if (!seen.insert({static_cast<int>(s), static_cast<int>(c)}).second) continue;
        if (!eligibility(c, s)) {
          ++summary_.ineligible;
          summary_.notices.push_back("skipping " + std::string(category_name(c)) + " in the " +
                                     std::string(scenario_name(s)) +
                                     " scenario: static objects cannot move");
          continue;
        }
        jobs_.push_back({s, c});
      }
    }
  }

  bool keep_existing(const std::string& id) const {
    auto it = existing_.find(id);
    if (it == existing_.end()) return false;
    const GenerationRecord& rec = it->second;
    if (rec.status == RecordStatus::kFailed) return true;
    return !rec.output_image.empty() && fs::exists(out_dir_ / rec.output_image);
  }

  void commit(GenerationRecord rec, const Raster* image) {
    if (rec.status != RecordStatus::kFailed && image != nullptr) {
      rec.output_image = "images/" + rec.id + ".png";
      const PngBytes png = encode_png(*image);
      write_file_atomic((out_dir_ / rec.output_image).string(), as_view(png));
    } else {
      rec.output_image.clear();
    }
    const std::string line = record_to_json(rec);
    std::lock_guard lock(write_mu_);
    append_ << line << '\n';
    append_.flush();
    fresh_[rec.id] = std::move(rec);
    ++summary_.attempted;
  }

  GenerationRecord failed_record(const BenchItem& item, const Job& job, const std::string& why) {
    GenerationRecord rec;
    rec.id = record_id(item.item_id, job.scenario, job.category);
    rec.item_id = item.item_id;
    rec.scenario = job.scenario;
    rec.category = job.category;
    rec.gt_action = item.gt_action;
    rec.source = item.source;
    rec.question = item.question;
    rec.source_image = item.image_ref;
    rec.seed = derive_item_seed(options_.seed, rec.id);
    rec.status = RecordStatus::kFailed;
    rec.error = why;
    return rec;
  }

  void process_item(const BenchItem& item) {
    std::vector<Job> todo;
    for (const Job& job : jobs_) {
      const std::string id = record_id(item.item_id, job.scenario, job.category);
      if (keep_existing(id)) {
        std::lock_guard lock(write_mu_);
        ++summary_.resumed;
        continue;
      }
      todo.push_back(job);
    }
    if (todo.empty()) return;

    Raster source;
    std::optional<VpEstimate> vp;
    GeometryConfig geometry;
    try {
      source = to_rgb(decode_png(read_file_bytes((source_dir_ / item.image_ref).string())));
      dims_of(source).validate();
      geometry = resolve_geometry(options_.geometry, dims_of(source));
      geometry.validate();
    } catch (const Error& e) {
      for (const Job& job : todo) {
        if (stopped()) return;
        commit(failed_record(item, job, error_text(e)), nullptr);
      }
      return;
    }
    const ImageDims dims = dims_of(source);

    for (const Job& job : todo) {
      if (stopped()) return;
      const std::string id = record_id(item.item_id, job.scenario, job.category);
      const auto started = options_.record_timestamps ? std::optional(utc_now()) : std::nullopt;
      double vp_y = 0.0;
      if (job.scenario == ScenarioKind::kDistance) {
        if (!vp) {
          vp = dims.width >= 32 && dims.height >= 32
                   ? vp_y_or_fallback(source, options_.vp)
                   : resolve_vp_y(std::nullopt, dims.height);
        }
        vp_y = vp->y;
      }
      EditPlan plan;
      try {
        plan = plan_scenario(job.scenario, item, job.category, dims, geometry, vp_y);
      } catch (const Error& e) {
        if (e.code() == ErrorCode::kScenarioInapplicable ||
            e.code() == ErrorCode::kCategoryInapplicable) {
          std::lock_guard lock(write_mu_);
          ++summary_.inapplicable;
          continue;
        }
        commit(failed_record(item, job, error_text(e)), nullptr);
        continue;
      }
      const std::uint64_t item_seed = derive_item_seed(options_.seed, id);
      PlanOutcome outcome =
          run_plan(item, plan, source, backends_, options_.max_trials, item_seed);
      if (job.scenario == ScenarioKind::kDistance) {
        VpRecord v;
        v.y = vp->y;
        v.fallback = vp->fallback;
        if (vp->vp) {
          v.x = vp->vp->x;
          v.support = vp->vp->support;
          v.confidence = vp->vp->confidence;
        }
        outcome.record.vp = v;
      }
      if (started) {
        outcome.record.started_at = started;
        outcome.record.finished_at = utc_now();
      }
      log(id + ": " + std::string(record_status_name(outcome.record.status)));
      commit(std::move(outcome.record), &outcome.image);
    }
  }

  void finalize() {
    std::map<std::string, GenerationRecord> all;
    for (auto& [id, rec] : existing_) all[id] = rec;
    for (auto& [id, rec] : fresh_) all[id] = rec;

    std::vector<std::string> record_lines;
    std::vector<std::pair<std::string, std::string>> entries;  // (id, json)
    for (const auto& [id, rec] : all) {
      record_lines.push_back(record_to_json(rec));
      switch (rec.status) {
        case RecordStatus::kSuccess: ++summary_.success; break;
        case RecordStatus::kPartialFailure: ++summary_.partial_failure; break;
        case RecordStatus::kFailed: ++summary_.failed; break;
      }
      summary_.outside_mask_warnings += rec.outside_mask_warnings;
      if (rec.vp && rec.vp->fallback) ++summary_.vp_fallbacks;
      if (rec.status != RecordStatus::kSuccess) continue;
      BenchmarkEntry e;
      e.id = rec.id;
      e.source_id = rec.item_id;
      e.image = rec.output_image;
      e.question = rec.question;
      e.gt_action = rec.gt_action;
      e.source = rec.source;
      e.scenario = rec.scenario;
      e.category = rec.category;
      entries.emplace_back(e.id, entry_to_json(e));
    }
    if (options_.include_originals) {
      for (const BenchItem& item : items_) {
        BenchmarkEntry e;
        e.id = item.item_id + "__none";
        e.source_id = item.item_id;
        e.image = "images/" + e.id + ".png";
        e.question = item.question;
        e.gt_action = item.gt_action;
        e.source = item.source;
        const fs::path dest = out_dir_ / e.image;
        try {
          if (!fs::exists(dest)) {
            const Raster img = decode_png(read_file_bytes((source_dir_ / item.image_ref).string()));
            write_file_atomic(dest.string(), as_view(encode_png(img)));
          }
        } catch (const Error& err) {
          summary_.notices.push_back("original " + item.item_id + " skipped: " + err.what());
          continue;
        }
        entries.emplace_back(e.id, entry_to_json(e));
      }
    }
    std::sort(entries.begin(), entries.end());
    std::vector<std::string> entry_lines;
    for (auto& [id, line] : entries) entry_lines.push_back(std::move(line));

    write_file_atomic(records_path_, join_lines(record_lines));
    write_file_atomic((out_dir_ / "items.jsonl").string(), join_lines(entry_lines));
  }

  fs::path out_dir_;
  fs::path source_dir_;
  Backends backends_;
  GenerateOptions options_;
  std::vector<BenchItem> items_;
  std::vector<Job> jobs_;
  std::string records_path_;
  std::map<std::string, GenerationRecord> existing_;
  std::map<std::string, GenerationRecord> fresh_;
  std::ofstream append_;
  std::mutex write_mu_;
  std::mutex log_mu_;
  GenerateSummary summary_;
};

}  // namespace

GenerateSummary generate_benchmark(const std::string& source_manifest, const std::string& out_dir,
                                   const Backends& backends, const GenerateOptions& options) {
  Generator gen(source_manifest, out_dir, backends, options);
  return gen.run();
}

int StatsTable::row_total(ScenarioKind s) const {
  int sum = 0;
  for (int v : counts[static_cast<std::size_t>(s)]) sum += v;
  return sum;
}

int StatsTable::column_total(ObjectCategory c) const {
  int sum = 0;
  for (const auto& row : counts) sum += row[static_cast<std::size_t>(c)];
  return sum;
}

int StatsTable::grand_total() const {
  int sum = 0;
  for (ScenarioKind s : kAllScenarios) sum += row_total(s);
  return sum;
}

StatsTable compute_stats(const std::vector<BenchmarkEntry>& entries) {
  StatsTable t;
  for (const auto& e : entries) {
    if (e.is_original()) {
      ++t.originals;
      continue;
    }
    ++t.counts[static_cast<std::size_t>(*e.scenario)][static_cast<std::size_t>(*e.category)];
  }
  return t;
}

std::string render_stats_table(const StatsTable& table) {
  auto title = [](std::string_view s) {
    std::string out(s);
    if (!out.empty()) out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
  };
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Scenario"};
  for (ObjectCategory c : kAllCategories) header.push_back(title(category_name(c)));
  header.push_back("Total");
  rows.push_back(header);
  for (ScenarioKind s : kAllScenarios) {
    std::vector<std::string> row{title(scenario_name(s))};
    for (ObjectCategory c : kAllCategories) {
      const int n = table.counts[static_cast<std::size_t>(s)][static_cast<std::size_t>(c)];
      row.push_back(!eligibility(c, s) && n == 0 ? "-" : std::to_string(n));
    }
    row.push_back(std::to_string(table.row_total(s)));
    rows.push_back(row);
  }
  std::vector<std::string> totals{"Total"};
  for (ObjectCategory c : kAllCategories) totals.push_back(std::to_string(table.column_total(c)));
  totals.push_back(std::to_string(table.grand_total()));
  rows.push_back(totals);

  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      const std::string& cell = rows[r][i];
      if (i == 0) {
        os << cell << std::string(width[i] - cell.size(), ' ');
      } else {
        os << (i == 1 || i + 1 == rows[r].size() ? " | " : "  ")
           << std::string(width[i] - cell.size(), ' ') << cell;
      }
    }
    os << '\n';
    if (r == 0 || r + 2 == rows.size()) {
      std::size_t line = 0;
      for (std::size_t i = 0; i < width.size(); ++i) line += width[i] + (i == 0 ? 0 : (i == 1 || i + 1 == width.size() ? 3 : 2));
      os << std::string(line, '-') << '\n';
    }
  }
  if (table.originals > 0) os << "Original (no edit) items: " << table.originals << '\n';
  return os.str();
}

}  // namespace hb
