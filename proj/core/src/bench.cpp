#include "sadre/bench.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sadre/attacks.hpp"
#include "sadre/corpus.hpp"
#include "sadre/metrics.hpp"
#include "sadre/pixelio.hpp"
#include "sadre/rng.hpp"

namespace sadre {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) known = true;
    if (!known)
      throw std::runtime_error("unknown key \"" + it.key() + "\" in " + where +
                               " (config keys are checked to catch typos)");
  }
}

AttackSpec parse_attack(const json& j, uint64_t bench_seed) {
  if (!j.is_object() || !j.contains("type"))
    throw std::runtime_error("each attack must be an object with a \"type\"");
  std::string type = j.at("type").get<std::string>();
  AttackSpec spec;
  if (type == "none") {
    reject_unknown_keys(j, {"type"}, "attack \"none\"");
    spec.kind = AttackSpec::Kind::None;
  } else if (type == "jpeg") {
    reject_unknown_keys(j, {"type", "quality"}, "attack \"jpeg\"");
    spec.kind = AttackSpec::Kind::Jpeg;
    spec.quality = j.value("quality", 50);
    if (spec.quality < 1 || spec.quality > 100)
      throw std::runtime_error("jpeg quality must be in 1..100");
  } else if (type == "sadre") {
    reject_unknown_keys(j,
                        {"type", "sigma", "sigma_mode", "noise_family", "lambda_s",
                         "mask_pct_lo", "mask_pct_hi", "steps", "lambda_w"},
                        "attack \"sadre\"");
    spec.kind = AttackSpec::Kind::Sadre;
    spec.sadre.seed = bench_seed;
    spec.sadre.sigma = j.value("sigma", 0.10);
    std::string mode = j.value("sigma_mode", "fixed");
    if (mode == "adaptive") spec.sadre.adaptive_sigma = true;
    else if (mode != "fixed") throw std::runtime_error("sigma_mode must be fixed or adaptive");
    spec.sadre.family = noise_family_from_name(j.value("noise_family", "laplace"));
    spec.sadre.lambda_s = j.value("lambda_s", 1.5);
    spec.sadre.search.lambda_w = j.value("lambda_w", 0.1);
    spec.sadre.saliency.pct_lo = j.value("mask_pct_lo", 50.0);
    spec.sadre.saliency.pct_hi = j.value("mask_pct_hi", 95.0);
    spec.sadre.steps = j.value("steps", 50);
  } else if (type == "regen") {
    reject_unknown_keys(j, {"type", "sigma", "noise_family"}, "attack \"regen\"");
    spec.kind = AttackSpec::Kind::Regen;
    spec.sigma = j.value("sigma", 0.10);
    spec.family = noise_family_from_name(j.value("noise_family", "laplace"));
  } else {
    throw std::runtime_error("unknown attack type: " + type);
  }
  return spec;
}

std::string format_sigma(double sigma) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", sigma);
  return buf;
}

}  // namespace

std::string AttackSpec::label() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Jpeg: return "jpeg_q" + std::to_string(quality);
    case Kind::Sadre: {
      std::string base = sadre.adaptive_sigma ? "sadre_adaptive" : "sadre_s" + format_sigma(sadre.sigma);
      char mask[32];
      std::snprintf(mask, sizeof(mask), "_m%g-%g", sadre.saliency.pct_lo, sadre.saliency.pct_hi);
      return base + "_" + noise_family_name(sadre.family) + mask;
    }
    case Kind::Regen: return "regen_s" + format_sigma(sigma) + "_" + noise_family_name(family);
  }
  return "?";
}

BenchConfig parse_bench_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown_keys(j,
                      {"corpus_dir", "image_size", "methods", "attacks", "seed",
                       "payload_len", "output", "formats", "strengths", "threads"},
                      "bench config");

  BenchConfig cfg;
  if (!j.contains("corpus_dir")) throw std::runtime_error("config needs corpus_dir");
  cfg.corpus_dir = j.at("corpus_dir").get<std::string>();
  cfg.image_size = j.value("image_size", 256);
  cfg.seed = j.value("seed", 0ull);
  cfg.payload_len = j.value("payload_len", 32);
  cfg.output = j.value("output", "bench_report");
  cfg.threads = j.value("threads", 1);
  if (cfg.image_size < 64) throw std::runtime_error("image_size must be >= 64");
  if (cfg.threads < 1) throw std::runtime_error("threads must be >= 1");

  if (j.contains("formats")) {
    for (const auto& f : j.at("formats")) {
      std::string name = f.get<std::string>();
      if (name != "csv" && name != "json" && name != "md")
        throw std::runtime_error("unknown report format: " + name);
      cfg.formats.push_back(name);
    }
  } else {
    cfg.formats = {"csv"};
  }

  json strengths = j.value("strengths", json::object());
  if (!strengths.is_object()) throw std::runtime_error("strengths must be an object");
  reject_unknown_keys(strengths, {"dwtdct", "dwtdctsvd"}, "strengths");

  if (!j.contains("methods") || j.at("methods").empty())
    throw std::runtime_error("config needs at least one method");
  for (const auto& m : j.at("methods")) {
    MethodSpec ms;
    ms.method = method_from_name(m.get<std::string>());
    ms.strength = strengths.value(method_name(ms.method), 0.0);
    cfg.methods.push_back(ms);
  }

  if (!j.contains("attacks") || j.at("attacks").empty())
    throw std::runtime_error("config needs at least one attack");
  for (const auto& a : j.at("attacks")) cfg.attacks.push_back(parse_attack(a, cfg.seed));

  return cfg;
}

BenchConfig load_bench_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_bench_config(ss.str());
}

namespace {

struct Job {
  int image_index;
  int method_index;
  int attack_index;
};

struct Stats {
  double mean = 0, stdev = 0;
};

Stats mean_std(const std::vector<double>& xs) {
  Stats s;
  bool any_inf = false;
  for (double x : xs)
    if (std::isinf(x)) any_inf = true;
  if (any_inf) {
    s.mean = std::numeric_limits<double>::infinity();
    s.stdev = std::numeric_limits<double>::infinity();
    return s;
  }
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs) var += (x - s.mean) * (x - s.mean);
  s.stdev = std::sqrt(var / static_cast<double>(xs.size()));  // population std
  return s;
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  std::vector<std::string> files = list_corpus_files(cfg.corpus_dir);
  if (files.empty()) throw std::runtime_error("corpus is empty: " + cfg.corpus_dir);

  // Load and normalize the corpus up front; unreadable entries are skipped
  // with a warning and counted.
  struct Entry {
    std::string name;
    Plane clean;
  };
  std::vector<Entry> corpus;
  int skipped = 0;
  for (const auto& path : files) {
    try {
      Plane luma = to_luma(load_image(path));
      corpus.push_back({std::filesystem::path(path).filename().string(),
                        prepare_plane(luma, cfg.image_size)});
    } catch (const std::exception& e) {
      std::fprintf(stderr, "warning: skipping %s: %s\n", path.c_str(), e.what());
      ++skipped;
    }
  }
  if (corpus.empty()) throw std::runtime_error("no readable corpus images in " + cfg.corpus_dir);

  std::vector<Job> jobs;
  for (int mi = 0; mi < static_cast<int>(cfg.methods.size()); ++mi)
    for (int ai = 0; ai < static_cast<int>(cfg.attacks.size()); ++ai)
      for (int ii = 0; ii < static_cast<int>(corpus.size()); ++ii)
        jobs.push_back({ii, mi, ai});

  std::vector<BenchSample> samples(jobs.size());

  auto run_job = [&](const Job& job) {
    const Entry& entry = corpus[job.image_index];
    const MethodSpec& method = cfg.methods[job.method_index];
    const AttackSpec& attack = cfg.attacks[job.attack_index];

    EmbedConfig ec = EmbedConfig::defaults(method.method,
                                           rng::word(cfg.seed, rng::stream_id("embed"),
                                                     static_cast<uint64_t>(job.image_index)),
                                           cfg.payload_len);
    if (method.strength > 0) ec.strength = method.strength;
    Payload payload = random_payload(
        rng::word(cfg.seed, rng::stream_id("bench_payload"), static_cast<uint64_t>(job.image_index)),
        cfg.payload_len);

    Plane xw = embed(entry.clean, payload, ec);

    Plane attacked;
    const Plane* fidelity_ref = &xw;
    uint64_t attack_seed = rng::word(
        cfg.seed, rng::stream_id("attack", static_cast<uint64_t>(job.method_index),
                                 static_cast<uint64_t>(job.attack_index)),
        static_cast<uint64_t>(job.image_index));

    switch (attack.kind) {
      case AttackSpec::Kind::None:
        attacked = xw;
        fidelity_ref = &entry.clean;  // no-attack row: embedding fidelity
        break;
      case AttackSpec::Kind::Jpeg:
        attacked = crop(jpeg_attack(pad_to_multiple(xw, 8), attack.quality), xw.width, xw.height);
        break;
      case AttackSpec::Kind::Sadre: {
        AttackConfig ac = attack.sadre;
        ac.seed = attack_seed;
        attacked = sadre_attack(xw, ac).image;
        break;
      }
      case AttackSpec::Kind::Regen: {
        Schedule sched = make_schedule();
        ShrinkDenoiser den(sched);
        attacked = regen_attack(xw, attack.sigma, attack.family, attack_seed, sched, den);
        break;
      }
    }

    Payload recovered = extract(attacked, ec);

    BenchSample s;
    s.image = entry.name;
    s.method = method_name(method.method);
    s.attack = attack.label();
    s.psnr = psnr(*fidelity_ref, attacked);
    s.ssim = ssim(*fidelity_ref, attacked);
    s.wp = wasserstein(*fidelity_ref, attacked, 1);
    s.bra = bra(recovered, payload);
    return s;
  };

  int threads = std::min<int>(cfg.threads, static_cast<int>(jobs.size()));
  if (threads <= 1) {
    for (size_t i = 0; i < jobs.size(); ++i) samples[i] = run_job(jobs[i]);
  } else {
    std::atomic<size_t> next{0};
    auto worker = [&] {
      for (;;) {
        size_t i = next.fetch_add(1);
        if (i >= jobs.size()) return;
        samples[i] = run_job(jobs[i]);
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Aggregate in fixed job order (jobs are already grouped by method/attack).
  BenchResult result;
  result.skipped_images = skipped;
  result.samples = samples;
  for (int mi = 0; mi < static_cast<int>(cfg.methods.size()); ++mi)
    for (int ai = 0; ai < static_cast<int>(cfg.attacks.size()); ++ai) {
      std::vector<double> psnrs, ssims, wps, bras;
      for (size_t i = 0; i < jobs.size(); ++i) {
        if (jobs[i].method_index != mi || jobs[i].attack_index != ai) continue;
        psnrs.push_back(samples[i].psnr);
        ssims.push_back(samples[i].ssim);
        wps.push_back(samples[i].wp);
        bras.push_back(samples[i].bra);
      }
      BenchRow row;
      row.method = method_name(cfg.methods[mi].method);
      row.attack = cfg.attacks[ai].label();
      row.n_images = static_cast<int>(psnrs.size());
      Stats st = mean_std(psnrs);
      row.psnr_mean = st.mean, row.psnr_std = st.stdev;
      st = mean_std(ssims);
      row.ssim_mean = st.mean, row.ssim_std = st.stdev;
      st = mean_std(wps);
      row.wp_mean = st.mean, row.wp_std = st.stdev;
      st = mean_std(bras);
      row.bra_mean = st.mean, row.bra_std = st.stdev;
      result.rows.push_back(row);
    }

  std::sort(result.rows.begin(), result.rows.end(), [](const BenchRow& a, const BenchRow& b) {
    return a.method != b.method ? a.method < b.method : a.attack < b.attack;
  });
  std::sort(result.samples.begin(), result.samples.end(),
            [](const BenchSample& a, const BenchSample& b) {
              if (a.method != b.method) return a.method < b.method;
              if (a.attack != b.attack) return a.attack < b.attack;
              return a.image < b.image;
            });
  return result;
}

std::string format_metric(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string render_csv(const std::vector<BenchRow>& rows) {
  std::string out =
      "method,attack,n,psnr_mean,psnr_std,ssim_mean,ssim_std,wp_mean,wp_std,bra_mean,bra_std\n";
  for (const auto& r : rows) {
    out += r.method + "," + r.attack + "," + std::to_string(r.n_images) + "," +
           format_metric(r.psnr_mean) + "," + format_metric(r.psnr_std) + "," +
           format_metric(r.ssim_mean) + "," + format_metric(r.ssim_std) + "," +
           format_metric(r.wp_mean) + "," + format_metric(r.wp_std) + "," +
           format_metric(r.bra_mean) + "," + format_metric(r.bra_std) + "\n";
  }
  return out;
}

namespace {

std::string json_metric(double v) {
  if (std::isinf(v) || std::isnan(v)) return "\"" + format_metric(v) + "\"";
  return format_metric(v);
}

}  // namespace

std::string render_json(const std::vector<BenchRow>& rows, int skipped) {
  // Hand-rendered so numbers match the CSV at print precision.
  std::string out = "{\n  \"fidelity_reference\": "
                    "\"attack rows compare against the watermarked image; "
                    "the no-attack row compares against the clean image\",\n";
  out += "  \"skipped_images\": " + std::to_string(skipped) + ",\n  \"rows\": [\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += "    {\"method\": \"" + r.method + "\", \"attack\": \"" + r.attack +
           "\", \"n\": " + std::to_string(r.n_images) +
           ", \"psnr_mean\": " + json_metric(r.psnr_mean) +
           ", \"psnr_std\": " + json_metric(r.psnr_std) +
           ", \"ssim_mean\": " + json_metric(r.ssim_mean) +
           ", \"ssim_std\": " + json_metric(r.ssim_std) +
           ", \"wp_mean\": " + json_metric(r.wp_mean) +
           ", \"wp_std\": " + json_metric(r.wp_std) +
           ", \"bra_mean\": " + json_metric(r.bra_mean) +
           ", \"bra_std\": " + json_metric(r.bra_std) + "}";
    out += i + 1 < rows.size() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string render_markdown(const std::vector<BenchRow>& rows) {
  std::string out =
      "# Watermark attack benchmark\n\n"
      "Fidelity reference: attack rows compare against the watermarked image "
      "(the adversary's input); the no-attack row compares the watermarked "
      "image against the clean one. Higher PSNR/SSIM = better fidelity; lower "
      "W_p/BRA = stronger attack.\n\n"
      "| method | attack | n | PSNR | SSIM | W_p | BRA |\n"
      "|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out += "| " + r.method + " | " + r.attack + " | " + std::to_string(r.n_images) + " | " +
           format_metric(r.psnr_mean) + " ± " + format_metric(r.psnr_std) + " | " +
           format_metric(r.ssim_mean) + " ± " + format_metric(r.ssim_std) + " | " +
           format_metric(r.wp_mean) + " ± " + format_metric(r.wp_std) + " | " +
           format_metric(r.bra_mean) + " ± " + format_metric(r.bra_std) + " |\n";
  }
  return out;
}

std::string render_per_image_csv(const std::vector<BenchSample>& samples) {
  std::string out = "image,method,attack,psnr,ssim,wp,bra\n";
  char buf[160];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g", s.psnr, s.ssim, s.wp, s.bra);
    out += s.image + "," + s.method + "," + s.attack + "," + buf + "\n";
  }
  return out;
}

void emit_report(const BenchResult& result, const std::vector<std::string>& formats,
                 const std::string& base) {
  if (result.rows.empty()) throw std::runtime_error("emit_report: no rows");
  auto write_file = [](const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write report: " + path);
    f << content;
    if (!f) throw std::runtime_error("write failure: " + path);
  };
  std::filesystem::path p(base);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  for (const auto& fmt : formats) {
    if (fmt == "csv") write_file(base + ".csv", render_csv(result.rows));
    else if (fmt == "json") write_file(base + ".json", render_json(result.rows, result.skipped_images));
    else if (fmt == "md") write_file(base + ".md", render_markdown(result.rows));
    else throw std::runtime_error("unknown report format: " + fmt);
  }
  // Per-image log always accompanies the aggregate (aggregation cross-check).
  write_file(base + ".per_image.csv", render_per_image_csv(result.samples));
}

}  // namespace sadre
