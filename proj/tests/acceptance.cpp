// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abuse/augmentation.hpp"
#include "abuse/cli.hpp"
#include "abuse/embeddings.hpp"
#include "abuse/ensemble.hpp"
#include "abuse/harness.hpp"
#include "abuse/lexicon.hpp"
#include "abuse/metrics.hpp"
#include "abuse/network.hpp"
#include "abuse/social_features.hpp"
#include "support.hpp"

using namespace abuse;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

// 1 ------------------------------------------------------------------------

double loss_of(const ModelParams& p, std::span<const double> text,
               std::span<const double> social, int label) {
  ForwardCache cache;
  const std::vector<double> prob{forward(p, text, social, true, nullptr, cache)};
  const std::vector<int> labels{label};
  return bce_loss(prob, labels);
}

Outcome gradient_correctness() {
  const auto start = Clock::now();
  NetworkDims dims;
  dims.social_in = 5;
  dims.social_hidden = 4;
  dims.text_in = 12;
  dims.text_hidden = 6;
  dims.joint_hidden = 5;
  dims.dropout_rate = 0.0;

  std::mt19937_64 rng(2718);
  std::normal_distribution<double> g(0.0, 0.5);
  double worst = 0.0;
  int draws = 0;
  while (draws < 3) {
    ModelParams p = ModelParams::zeros(dims);
    for (auto block : p.blocks())
      for (auto& x : block) x = g(rng);
    std::vector<double> text(dims.text_in), social(dims.social_in);
    for (auto& x : text) x = g(rng);
    for (auto& x : social) x = std::abs(g(rng));
    const int label = draws % 2;

    ForwardCache cache;
    forward(p, text, social, true, nullptr, cache);
    bool near_kink = false;
    for (const auto* z : {&cache.z1, &cache.z2, &cache.z3, &cache.z4})
      for (double v : *z) near_kink |= std::abs(v) < 1e-3;
    if (near_kink) continue;  // finite differences straddle a ReLU corner
    ++draws;

    const ModelParams grads = backward(p, cache, label);
    const double h = 1e-5;
    auto pb = p.blocks();
    const auto gb = grads.blocks();
    for (std::size_t b = 0; b < pb.size(); ++b) {
      for (std::size_t k = 0; k < pb[b].size(); ++k) {
        const double saved = pb[b][k];
        pb[b][k] = saved + h;
        const double up = loss_of(p, text, social, label);
        pb[b][k] = saved - h;
        const double down = loss_of(p, text, social, label);
        pb[b][k] = saved;
        const double numeric = (up - down) / (2 * h);
        const double scale = std::max({std::abs(numeric), std::abs(gb[b][k]), 1e-8});
        worst = std::max(worst, std::abs(numeric - gb[b][k]) / scale);
      }
    }
  }
  const double t = seconds_since(start);
  return {worst < 1e-4 && t < 30.0,
          fmt("max relative error %.3g over 3 draws, %.2fs", worst, t)};
}

// 2 ------------------------------------------------------------------------

// Majority voting with confidence decision, written out step by step.
int reference_vote(const std::vector<MemberOutput>& o, double thr, std::size_t best) {
  int label_one = 0;
  for (std::size_t j = 0; j < o.size(); ++j)
    if (o[j].label == 1) label_one = label_one + 1;
  if (label_one > 3) return 1;
  if (label_one <= 2) return 0;
  double conf_one = 0.0;
  double conf_zero = 0.0;
  for (std::size_t j = 0; j < o.size(); ++j) {
    const double d = o[j].probability > thr ? o[j].probability - thr : thr - o[j].probability;
    if (o[j].label == 1) conf_one = conf_one + d;
    else conf_zero = conf_zero + d;
  }
  if (conf_one > conf_zero) return 1;
  if (conf_zero > conf_one) return 0;
  return o[best].label;
}

Outcome ensemble_oracle() {
  const auto start = Clock::now();
  std::mt19937_64 rng(31415);
  std::uniform_real_distribution<double> above(0.5, 1.0), below(0.0, 0.5);
  const double thr = 0.5;
  std::size_t cases = 0, mismatches = 0, confidence = 0, fallback = 0;
  auto check = [&](const std::vector<MemberOutput>& o, std::size_t best) {
    const VoteResult v = majority_voting(o, thr, best);
    ++cases;
    if (v.label != reference_vote(o, thr, best)) ++mismatches;
    if (v.path == DecisionPath::confidence) ++confidence;
    if (v.path == DecisionPath::best_fallback) ++fallback;
  };
  for (int draw = 0; draw < 5; ++draw) {
    for (unsigned pattern = 0; pattern < 64; ++pattern) {
      std::vector<MemberOutput> o(6);
      for (std::size_t j = 0; j < 6; ++j) {
        const int label = static_cast<int>((pattern >> j) & 1U);
        o[j] = {label ? above(rng) : below(rng), label};
      }
      check(o, static_cast<std::size_t>(draw) % 6);
      if (std::popcount(pattern) == 3) {
        // Exact tie: mirrored distances, all exactly representable.
        std::vector<MemberOutput> tie(6);
        const double offsets[3] = {0.125, 0.25, 0.375};
        std::size_t one = 0, zero = 0;
        for (std::size_t j = 0; j < 6; ++j) {
          const int label = static_cast<int>((pattern >> j) & 1U);
          tie[j] = {label ? thr + offsets[one++] : thr - offsets[zero++], label};
        }
        for (std::size_t best = 0; best < 6; ++best) check(tie, best);
      }
    }
  }
  const double t = seconds_since(start);
  std::ostringstream d;
  d << cases << " cases, " << mismatches << " mismatches, " << confidence
    << " confidence, " << fallback << " best-model fallbacks, " << fmt("%.3fs", t);
  return {mismatches == 0 && confidence > 0 && fallback > 0 && t < 5.0, d.str()};
}

// 3 ------------------------------------------------------------------------

Outcome polarity_exactness() {
  ExtendedAbusiveSet lex;
  lex.words["hi"] = {"pagal", "kamina"};
  lex.words["ta"] = {"loosu"};

  // (user, post, text, language); counts per group known by construction.
  struct Row {
    const char* user;
    const char* post;
    const char* text;
    const char* lang;
  };
  const std::vector<Row> rows{
      {"u1", "p1", "tu pagal hai", "hi"}, {"u1", "p1", "accha hai", "hi"},
      {"u1", "p2", "kamina", "hi"},       {"u1", "p2", "theek", "hi"},
      {"u1", "p3", "sahi baat", "hi"},    {"u2", "p1", "loosu da", "ta"},
      {"u2", "p3", "nalla", "ta"},        {"u2", "p3", "pagal", "ta"},
      {"u3", "p2", "pagal kamina", "hi"}, {"u3", "p2", "pagalpan", "hi"},
  };
  std::vector<Comment> comments;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    comments.push_back(testing::comment(std::to_string(i), rows[i].text, rows[i].post,
                                        std::string(rows[i].user), 0, rows[i].lang));
  }
  const Dataset ds(comments);

  // Hand counts (non, abuse): "pagal" is not a Tamil word and "pagalpan" is
  // not a token match.
  const std::map<std::string, std::pair<int, int>> users{
      {"u1", {3, 2}}, {"u2", {2, 1}}, {"u3", {1, 1}}};
  const std::map<std::string, std::pair<int, int>> posts{
      {"p1", {1, 2}}, {"p2", {2, 2}}, {"p3", {3, 0}}};
  auto polarity_formula = [](std::pair<int, int> c) {
    return static_cast<double>(c.first - c.second) / static_cast<double>(c.first + c.second);
  };

  double worst = 0.0;
  const auto index = PolarityIndex::build(ds, PolaritySource::from_lexicon(ds, lex));
  auto group = [&](const std::vector<std::size_t>& members) {
    std::vector<const Comment*> refs;
    for (auto i : members) refs.push_back(&ds[i]);
    return refs;
  };
  for (const auto& [u, c] : users) {
    const auto refs = group(ds.by_user().at(u));
    worst = std::max(worst, std::abs(user_polarity(refs, lex) - polarity_formula(c)));
    worst = std::max(worst, std::abs(index.user(u) - polarity_formula(c)));
  }
  for (const auto& [p, c] : posts) {
    const auto refs = group(ds.by_post().at(p));
    worst = std::max(worst, std::abs(post_polarity(refs, lex) - polarity_formula(c)));
    worst = std::max(worst, std::abs(index.post(p) - polarity_formula(c)));
  }

  // Max rule where the two sources disagree in both directions.
  bool max_ok = true;
  {
    const auto u1 = group(ds.by_user().at("u1"));  // lexicon 0.2
    const std::vector<int> all_bad(u1.size(), 1);  // classifier -1
    const std::vector<int> all_good(u1.size(), 0); // classifier +1
    max_ok &= std::abs(user_polarity(u1, lex, std::span<const int>(all_bad)) - 0.2) < 1e-12;
    max_ok &= user_polarity(u1, lex, std::span<const int>(all_good)) == 1.0;

    const auto p1 = group(ds.by_post().at("p1"));  // lexicon -1/3
    const std::vector<int> cls{1, 1, 0};           // classifier -1/3 too
    max_ok &= std::abs(post_polarity(p1, lex, std::span<const int>(cls)) + 1.0 / 3) < 1e-12;
    const std::vector<int> cls_lo{1, 1, 1};  // -1
    max_ok &= std::abs(post_polarity(p1, lex, std::span<const int>(cls_lo)) + 1.0 / 3) < 1e-12;

    std::map<std::size_t, int> cls_index;
    for (std::size_t i = 0; i < ds.size(); ++i) cls_index[i] = 0;
    const auto lex_src = PolaritySource::from_lexicon(ds, lex);
    const auto cls_src =
        PolaritySource::from_labels(PolaritySource::Kind::pre_classifier, cls_index);
    const auto combined = PolarityIndex::build(ds, lex_src, &cls_src);
    max_ok &= combined.user("u1") == 1.0 && combined.post("p1") == 1.0;
    for (auto& [i, l] : cls_index) l = 1;
    const auto cls_bad =
        PolaritySource::from_labels(PolaritySource::Kind::pre_classifier, cls_index);
    const auto kept = PolarityIndex::build(ds, lex_src, &cls_bad);
    max_ok &= std::abs(kept.user("u1") - polarity_formula(users.at("u1"))) < 1e-12;
  }
  return {worst <= 1e-12 && max_ok,
          fmt("max |error| %.3g on 6 groups; max rule ", worst) + (max_ok ? "ok" : "violated")};
}

// 4 ------------------------------------------------------------------------

Outcome combined_arithmetic() {
  const double grid[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  double worst = 0.0;
  for (double u : grid)
    for (double p : grid)
      worst = std::max(worst, std::abs(combined_user_post_polarity(u, p, 0.47) -
                                       (0.47 * u + 0.53 * p)));
  return {worst <= 1e-12, fmt("25 grid points, max |error| %.3g", worst)};
}

// 5 ------------------------------------------------------------------------

Outcome augmentation_contract() {
  const std::vector<std::string> langs{"hi", "bn", "ta"};
  std::vector<Comment> comments;
  std::mt19937_64 rng(5);
  for (std::size_t i = 0; i < 600; ++i) {
    const std::string lang = langs[i % 3];
    const int label = i % 4 == 0 ? 1 : 0;
    comments.push_back(testing::comment("c" + std::to_string(i),
                                        "shabd " + std::to_string(rng() % 1000) + " vakya",
                                        "p" + std::to_string(i % 17),
                                        "u" + std::to_string(i % 29), label, lang));
  }
  const Dataset train(comments);
  AbusiveSet base;
  base.words["hi"] = {"pagal", "kamina", "bewakoof"};
  base.words["bn"] = {"boka", "shala"};
  base.words["ta"] = {"loosu", "kaluthai"};
  const ExtendedAbusiveSet ext = extend_spellings(base, SubstitutionRules::defaults());

  const Dataset out = augment(train, ext, 77);
  std::size_t expected = train.size();
  for (const auto& [lang, words] : ext.words) expected += words.size();

  bool rows_ok = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Comment& c = out[i];
    if (i < train.size()) {
      rows_ok &= c == train[i];
      continue;
    }
    const auto& words = ext.words.at(c.language);
    const auto space = c.text.find(' ');
    rows_ok &= c.synthetic && c.label == 1 && space != std::string::npos &&
               words.contains(c.text.substr(0, space)) &&
               contains_abuse(c.text, ext, c.language).has_value();
  }

  testing::TempDir dir;
  save_dataset(out, dir / "a.csv");
  save_dataset(augment(train, ext, 77), dir / "b.csv");
  const bool same = testing::read_text(dir / "a.csv") == testing::read_text(dir / "b.csv");

  std::ostringstream d;
  d << out.size() << " rows (expected " << expected << "), rows "
    << (rows_ok ? "ok" : "bad") << ", rerun " << (same ? "identical" : "differs");
  return {out.size() == expected && rows_ok && same, d.str()};
}

// 6 ------------------------------------------------------------------------

double direct_rpb(const std::vector<double>& x, const std::vector<int>& y) {
  const double n = static_cast<double>(x.size());
  double s1 = 0, s0 = 0, n1 = 0, n0 = 0, mean = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mean += x[i];
    if (y[i]) {
      s1 += x[i];
      n1 += 1;
    } else {
      s0 += x[i];
      n0 += 1;
    }
  }
  mean /= n;
  double ss = 0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double sn = std::sqrt(ss / n);
  return (s1 / n1 - s0 / n0) / sn * std::sqrt((n1 / n) * (n0 / n));
}

Outcome point_biserial_correctness() {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<int> len(4, 20);
  std::normal_distribution<double> g(0.0, 3.0);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  double oracle_err = 0.0, affine_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = len(rng);
    std::vector<double> x(n);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
      x[i] = g(rng);
      y[i] = static_cast<int>(rng() & 1U);
    }
    y[0] = 0;
    y[1] = 1;
    const double r = point_biserial(x, y);
    oracle_err = std::max(oracle_err, std::abs(r - direct_rpb(x, y)));
    const double a = scale(rng), b = g(rng);
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = a * x[i] + b;
    affine_err = std::max(affine_err, std::abs(point_biserial(t, y) - r));
  }
  const std::vector<int> labels{0, 1, 1, 0, 1, 0, 0};
  std::vector<double> aligned(labels.begin(), labels.end()), anti;
  for (int l : labels) anti.push_back(1.0 - l);
  const double plus = point_biserial(aligned, labels);
  const double minus = point_biserial(anti, labels);
  const bool extremes = std::abs(plus - 1.0) < 1e-12 && std::abs(minus + 1.0) < 1e-12;
  return {oracle_err <= 1e-10 && affine_err <= 1e-10 && extremes,
          fmt("oracle |error| %.3g, affine |error| %.3g, aligned %.12f", oracle_err,
              affine_err, plus) +
              fmt(", anti-aligned %.12f", minus)};
}

// 7 ------------------------------------------------------------------------

Outcome metrics_fixture() {
  const Confusion c{2, 1, 6, 1};
  const double p = precision(c).value, r = recall(c).value, f = f1(c).value,
               a = accuracy(c).value;
  const double err = std::max({std::abs(p - 2.0 / 3), std::abs(r - 2.0 / 3),
                               std::abs(f - 2.0 / 3), std::abs(a - 0.8)});
  return {err <= 1e-12, fmt("P %.15f R %.15f F1 %.15f", p, r, f) + fmt(" Acc %.15f", a)};
}

// 8 ------------------------------------------------------------------------

Outcome ablation_direction() {
  const auto start = Clock::now();
  ExperimentConfig cfg;
  cfg.corpus.n_comments = 10000;
  cfg.corpus.user_consistency = 0.9;
  cfg.corpus.post_consistency = 0.9;
  cfg.corpus.report_signal = 0.5;
  cfg.corpus.seed = 1;
  cfg.train.seed = 1;
  const auto rows = run_experiment(cfg);

  double all_gain = 0.0;
  std::string best_single;
  double best_gain = -1.0;
  std::ostringstream d;
  for (const auto& row : rows) {
    d << row.mask << ' ' << fmt("%.4f", row.metrics.f.value) << "; ";
    if (row.mask == "text_only") continue;
    if (row.mask == "all") all_gain = row.f1_gain;
    else if (row.f1_gain > best_gain) {
      best_gain = row.f1_gain;
      best_single = row.mask;
    }
  }
  const double t = seconds_since(start);
  d << "all - text " << fmt("%.4f", all_gain) << ", largest single gain " << best_single
    << fmt(" (%.4f), %.1fs", best_gain, t);
  return {all_gain >= 0.02 && best_single == "user_post_polarity" && t < 600.0, d.str()};
}

// 9 ------------------------------------------------------------------------

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "abuse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) std::cerr << "abuse " << args[1] << " failed (" << code << "): " << err.str();
  return code;
}

std::string pipeline_run(const std::filesystem::path& dir) {
  auto p = [&](const char* name) { return (dir / name).string(); };
  testing::write_text(dir / "spec.ini",
                      "[corpus]\nn_users = 80\nn_posts = 20\nn_comments = 800\n"
                      "user_consistency = 0.9\npost_consistency = 0.9\n");
  testing::write_text(dir / "run.ini",
                      "[features]\nlexicon = lexicon.txt\npre_classifier = true\n"
                      "[train]\nepochs = 3\nseed = 11\ntoken_dim = 8\ntext_hidden = 16\n"
                      "joint_hidden = 8\n");
  const bool ok =
      cli({"synth", "--spec", p("spec.ini"), "--seed", "21", "--output", p("corpus.csv"),
           "--lexicon-output", p("lexicon.txt")}) == 0 &&
      cli({"preprocess", "--input", p("corpus.csv"), "--config", p("run.ini"), "--output",
           p("clean.csv")}) == 0 &&
      cli({"split", "--input", p("clean.csv"), "--seed", "3", "--train-output", p("train.csv"),
           "--test-output", p("test.csv")}) == 0 &&
      cli({"augment", "--input", p("train.csv"), "--lexicon", p("lexicon.txt"), "--seed", "4",
           "--output", p("aug.csv")}) == 0 &&
      cli({"train", "--train", p("aug.csv"), "--config", p("run.ini"), "--mock-seed", "1",
           "--mock-seed", "2", "--mock-seed", "3", "--seq-len", "8", "--seq-len", "16",
           "--out-manifest", p("model/manifest.csv")}) == 0 &&
      cli({"predict", "--manifest", p("model/manifest.csv"), "--input", p("test.csv"),
           "--output", p("pred.csv")}) == 0 &&
      cli({"evaluate", "--predictions", p("pred.csv"), "--labels", p("test.csv"),
           "--by-language", "--output", p("report.csv")}) == 0;
  return ok ? testing::read_text(dir / "pred.csv") : std::string();
}

Outcome end_to_end_determinism() {
  testing::TempDir a, b;
  const std::string first = pipeline_run(a.path());
  const std::string second = pipeline_run(b.path());
  const bool same = !first.empty() && first == second;
  std::ostringstream d;
  d << "prediction files " << first.size() << " and " << second.size() << " bytes, "
    << (same ? "identical" : "different");
  return {same, d.str()};
}

// 10 -----------------------------------------------------------------------

Outcome shape_fidelity() {
  const auto tokens = tokenize_fixed("ek chhota sa vakya", 128);
  const FlatEmbedding flat = reshape_hidden(mock_encode(tokens, kDefaultTokenDim, 1));
  const NetworkDims dims = NetworkDims::full_size(128, kDefaultTokenDim);
  const ModelParams params = init_params(dims, 1);
  const bool ok = flat.values.size() == 98304 && dims.text_in == 98304 &&
                  params.w2.rows == 768 && params.w2.cols == 98304 &&
                  params.w1.rows == 16 && params.w1.cols == 5 &&
                  params.w3.rows == 100 && params.w3.cols == 784 &&
                  params.w4.rows == 100 && params.w4.cols == 100 &&
                  params.w5.rows == 1 && params.w5.cols == 100;
  const std::vector<double> social(5, 0.5);
  const double prob = predict(params, flat.values, social, 0.5).probability;
  std::ostringstream d;
  d << "flat " << flat.values.size() << ", W2 " << params.w2.rows << "x" << params.w2.cols
    << ", W3 " << params.w3.rows << "x" << params.w3.cols << ", "
    << params.parameter_count() << " parameters, forward p=" << fmt("%.4f", prob);
  return {ok && prob > 0.0 && prob < 1.0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"gradient correctness", gradient_correctness},
      {"ensemble voting oracle", ensemble_oracle},
      {"polarity exactness", polarity_exactness},
      {"combined polarity arithmetic", combined_arithmetic},
      {"augmentation contract", augmentation_contract},
      {"point-biserial correctness", point_biserial_correctness},
      {"metrics fixture", metrics_fixture},
      {"directional ablation", ablation_direction},
      {"end-to-end determinism", end_to_end_determinism},
      {"shape fidelity", shape_fidelity},
  };
  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << k + 1 << ": "
              << criteria[k].first << " -- " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
