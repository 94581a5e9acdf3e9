// Command-line front end: embed/extract watermarks, run attacks, score image
// pairs, export saliency masks, generate synthetic corpora and run the full
// benchmark grid. Exit codes: 0 success, 1 usage error, 2 runtime error.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "sadre/attacks.hpp"
#include "sadre/bench.hpp"
#include "sadre/corpus.hpp"
#include "sadre/diffusion.hpp"
#include "sadre/metrics.hpp"
#include "sadre/pixelio.hpp"
#include "sadre/saliency.hpp"
#include "sadre/watermark.hpp"

namespace {

using namespace sadre;

struct EmbedArgs {
  std::string input, output, method = "dwtdct", payload_hex;
  double strength = 0.0;
  uint64_t seed = 0;
  int payload_len = -1;
};

struct ExtractArgs {
  std::string input, method = "dwtdct", expect_hex;
  double strength = 0.0;
  uint64_t seed = 0;
  int payload_len = 32;
};

struct AttackArgs {
  std::string input, output, attack = "sadre", family = "laplace", sigma_mode = "fixed";
  double sigma = 0.10, lambda_s = 1.5, mask_lo = 50.0, mask_hi = 95.0;
  int quality = 50;
  uint64_t seed = 0;
};

struct EvalArgs {
  std::string a, b, expect_hex, method = "dwtdct";
  double strength = 0.0;
  uint64_t seed = 0;
  int payload_len = -1;
};

struct MaskArgs {
  std::string input, output;
};

struct BenchArgs {
  std::string config;
  int threads = 0;
};

struct SynthArgs {
  std::string outdir;
  int count = 20, size = 256;
  uint64_t seed = 1;
};

EmbedConfig make_embed_config(const std::string& method, double strength, uint64_t seed,
                              int payload_len) {
  EmbedConfig cfg = EmbedConfig::defaults(method_from_name(method), seed, payload_len);
  if (strength > 0) cfg.strength = strength;
  return cfg;
}

bool wants_gray(const std::string& path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".pgm";
}

// .pgm outputs carry the processed luma plane; color formats splice the new
// luma back into the source channels.
void save_processed(const ImageRGB& src, const Plane& luma, const std::string& path) {
  if (wants_gray(path)) save_image(luma, path);
  else save_image(replace_luma(src, luma), path);
}

int cmd_embed(const EmbedArgs& args) {
  if (args.payload_hex.empty()) throw std::runtime_error("embed requires --payload <hex>");
  Payload payload = payload_from_hex(args.payload_hex, args.payload_len);
  ImageRGB img = load_image(args.input);
  EmbedConfig cfg = make_embed_config(args.method, args.strength, args.seed,
                                      static_cast<int>(payload.bits.size()));
  Plane watermarked = embed(to_luma(img), payload, cfg);
  save_processed(img, watermarked, args.output);
  std::printf("embedded %zu bits with %s into %s\n", payload.bits.size(),
              method_name(cfg.method).c_str(), args.output.c_str());
  return 0;
}

int cmd_extract(const ExtractArgs& args) {
  ImageRGB img = load_image(args.input);
  EmbedConfig cfg = make_embed_config(args.method, args.strength, args.seed, args.payload_len);
  Payload recovered = extract(to_luma(img), cfg);
  std::printf("payload=%s\n", payload_to_hex(recovered).c_str());
  if (!args.expect_hex.empty()) {
    Payload expected = payload_from_hex(args.expect_hex, args.payload_len);
    std::printf("BRA=%.4f\n", bra(recovered, expected));
  }
  return 0;
}

int cmd_attack(const AttackArgs& args) {
  ImageRGB img = load_image(args.input);
  Plane luma = to_luma(img);
  Plane attacked;

  if (args.attack == "jpeg") {
    Plane padded = pad_to_multiple(luma, 8);
    attacked = crop(jpeg_attack(padded, args.quality), luma.width, luma.height);
  } else if (args.attack == "sadre") {
    AttackConfig cfg;
    cfg.seed = args.seed;
    cfg.family = noise_family_from_name(args.family);
    cfg.sigma = args.sigma;
    cfg.adaptive_sigma = args.sigma_mode == "adaptive";
    if (!cfg.adaptive_sigma && args.sigma_mode != "fixed")
      throw std::runtime_error("--sigma-mode must be fixed or adaptive");
    cfg.lambda_s = args.lambda_s;
    cfg.saliency.pct_lo = args.mask_lo;
    cfg.saliency.pct_hi = args.mask_hi;
    AttackResult result = sadre_attack(luma, cfg);
    attacked = result.image;
    std::printf("%s\n", result.trace.to_json().c_str());
  } else if (args.attack == "regen") {
    Schedule sched = make_schedule();
    ShrinkDenoiser den(sched, args.lambda_s);
    attacked = regen_attack(luma, args.sigma, noise_family_from_name(args.family),
                            args.seed, sched, den);
  } else {
    throw std::runtime_error("unknown attack: " + args.attack +
                             " (expected sadre, jpeg or regen)");
  }

  save_processed(img, attacked, args.output);
  return 0;
}

int cmd_eval(const EvalArgs& args) {
  Plane a = to_luma(load_image(args.a));
  Plane b = to_luma(load_image(args.b));
  double wp = wasserstein(a, b, 1);
  double ss = ssim(a, b);
  double ds = (1.0 - ss) / 2.0;
  std::printf("PSNR=%s\n", format_metric(psnr(a, b)).c_str());
  std::printf("SSIM=%.4f\n", ss);
  std::printf("DSSIM=%.4f\n", ds);
  std::printf("W_p=%.4f\n", wp);
  std::printf("D=%.4f\n", composite_d(wp, ds));
  if (!args.expect_hex.empty()) {
    Payload expected = payload_from_hex(args.expect_hex, args.payload_len);
    EmbedConfig cfg = make_embed_config(args.method, args.strength, args.seed,
                                        static_cast<int>(expected.bits.size()));
    std::printf("BRA=%.4f\n", bra(extract(b, cfg), expected));
  }
  return 0;
}

int cmd_mask(const MaskArgs& args) {
  Plane luma = to_luma(load_image(args.input));
  Mask m = estimate_saliency(luma);
  save_image(mask_to_plane(m, luma.width, luma.height), args.output);
  return 0;
}

int cmd_bench(const BenchArgs& args) {
  BenchConfig cfg = load_bench_config(args.config);
  if (args.threads > 0) cfg.threads = args.threads;
  BenchResult result = run_bench(cfg);
  emit_report(result, cfg.formats, cfg.output);
  std::printf("%s", render_csv(result.rows).c_str());
  std::printf("report written to %s.{%s} (+ per-image log)\n", cfg.output.c_str(),
              [&] {
                std::string s;
                for (size_t i = 0; i < cfg.formats.size(); ++i)
                  s += (i ? "," : "") + cfg.formats[i];
                return s;
              }()
                  .c_str());
  return 0;
}

int cmd_synth(const SynthArgs& args) {
  auto paths = write_synthetic_corpus(args.outdir, args.count, args.size, args.seed);
  std::printf("wrote %zu images to %s\n", paths.size(), args.outdir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Invisible-watermark attack bench: saliency-guided diffusion "
               "reconstruction, classical embedders and verification metrics"};
  app.require_subcommand(1);

  EmbedArgs embed_args;
  auto* embed_cmd = app.add_subcommand("embed", "Embed a payload into an image");
  embed_cmd->add_option("input", embed_args.input, "input image")->required();
  embed_cmd->add_option("output", embed_args.output, "output image")->required();
  embed_cmd->add_option("--method", embed_args.method, "dwtdct | dwtdctsvd");
  embed_cmd->add_option("--payload", embed_args.payload_hex, "payload as lowercase hex")->required();
  embed_cmd->add_option("--strength", embed_args.strength, "embedding strength (0 = method default)");
  embed_cmd->add_option("--seed", embed_args.seed, "PN / assignment seed");
  embed_cmd->add_option("--payload-len", embed_args.payload_len, "payload bits (default: 4 per hex char)");

  ExtractArgs extract_args;
  auto* extract_cmd = app.add_subcommand("extract", "Extract a payload (blind)");
  extract_cmd->add_option("input", extract_args.input, "watermarked image")->required();
  extract_cmd->add_option("--method", extract_args.method, "dwtdct | dwtdctsvd");
  extract_cmd->add_option("--seed", extract_args.seed, "seed used at embed time");
  extract_cmd->add_option("--strength", extract_args.strength, "strength used at embed time (0 = default)");
  extract_cmd->add_option("--payload-len", extract_args.payload_len, "payload bits");
  extract_cmd->add_option("--expect", extract_args.expect_hex, "expected payload hex; prints BRA");

  AttackArgs attack_args;
  auto* attack_cmd = app.add_subcommand("attack", "Apply a watermark-removal attack");
  attack_cmd->add_option("input", attack_args.input, "input image")->required();
  attack_cmd->add_option("output", attack_args.output, "output image")->required();
  attack_cmd->add_option("--attack", attack_args.attack, "sadre | jpeg | regen");
  attack_cmd->add_option("--sigma", attack_args.sigma, "noise level (sadre/regen)");
  attack_cmd->add_option("--quality", attack_args.quality, "JPEG quality 1..100");
  attack_cmd->add_option("--noise-family", attack_args.family, "laplace | cauchy | poisson");
  attack_cmd->add_option("--sigma-mode", attack_args.sigma_mode, "fixed | adaptive");
  attack_cmd->add_option("--lambda-s", attack_args.lambda_s, "shrink-denoiser threshold scale");
  attack_cmd->add_option("--mask-lo", attack_args.mask_lo, "mask smoothstep lower percentile");
  attack_cmd->add_option("--mask-hi", attack_args.mask_hi, "mask smoothstep upper percentile");
  attack_cmd->add_option("--seed", attack_args.seed, "noise seed");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score an image pair (PSNR/SSIM/DSSIM/W_p/D)");
  eval_cmd->add_option("a", eval_args.a, "reference image")->required();
  eval_cmd->add_option("b", eval_args.b, "test image")->required();
  eval_cmd->add_option("--payload-expect", eval_args.expect_hex, "expected payload hex; prints BRA of b");
  eval_cmd->add_option("--method", eval_args.method, "dwtdct | dwtdctsvd (for --payload-expect)");
  eval_cmd->add_option("--seed", eval_args.seed, "embed seed (for --payload-expect)");
  eval_cmd->add_option("--strength", eval_args.strength, "embed strength (for --payload-expect)");
  eval_cmd->add_option("--payload-len", eval_args.payload_len, "payload bits");

  MaskArgs mask_args;
  auto* mask_cmd = app.add_subcommand("mask", "Export the saliency mask as a PGM heat map");
  mask_cmd->add_option("input", mask_args.input, "input image")->required();
  mask_cmd->add_option("output", mask_args.output, "output .pgm")->required();

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Run the benchmark grid from a JSON config");
  bench_cmd->add_option("--config", bench_args.config, "JSON config path")->required();
  bench_cmd->add_option("--threads", bench_args.threads, "worker threads (overrides config)");

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Write a deterministic synthetic corpus");
  synth_cmd->add_option("outdir", synth_args.outdir, "output directory")->required();
  synth_cmd->add_option("--count", synth_args.count, "number of images");
  synth_cmd->add_option("--size", synth_args.size, "square side length");
  synth_cmd->add_option("--seed", synth_args.seed, "corpus seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (embed_cmd->parsed()) return cmd_embed(embed_args);
    if (extract_cmd->parsed()) return cmd_extract(extract_args);
    if (attack_cmd->parsed()) return cmd_attack(attack_args);
    if (eval_cmd->parsed()) return cmd_eval(eval_args);
    if (mask_cmd->parsed()) return cmd_mask(mask_args);
    if (bench_cmd->parsed()) return cmd_bench(bench_args);
    if (synth_cmd->parsed()) return cmd_synth(synth_args);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
