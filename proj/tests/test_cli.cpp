#include <doctest.h>

#include <sstream>

#include "abuse/cli.hpp"
#include "abuse/ensemble.hpp"
#include "abuse/error.hpp"
#include "abuse/pipeline.hpp"
#include "support.hpp"

using namespace abuse;
using testing::TempDir;
using testing::read_text;
using testing::write_text;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "abuse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Small corpus, config and preprocessed splits in one directory.
struct Workspace {
  TempDir dir;
  std::string p(const std::string& name) const { return (dir / name).string(); }

  Workspace() {
    write_text(dir / "spec.ini",
               "[corpus]\nn_users = 40\nn_posts = 10\nn_comments = 300\n"
               "user_consistency = 0.9\npost_consistency = 0.9\n");
    write_text(dir / "run.ini",
               "[features]\nlexicon = lexicon.txt\npre_classifier = true\n"
               "[train]\nepochs = 2\nseed = 5\ntoken_dim = 8\n"
               "text_hidden = 8\njoint_hidden = 4\nsocial_hidden = 4\n");
    REQUIRE(run({"synth", "--spec", p("spec.ini"), "--seed", "9", "--output", p("corpus.csv"),
                 "--lexicon-output", p("lexicon.txt")})
                .code == 0);
    REQUIRE(run({"preprocess", "--input", p("corpus.csv"), "--config", p("run.ini"),
                 "--output", p("clean.csv")})
                .code == 0);
    REQUIRE(run({"split", "--input", p("clean.csv"), "--seed", "1", "--train-output",
                 p("train.csv"), "--test-output", p("test.csv")})
                .code == 0);
    REQUIRE(run({"augment", "--input", p("train.csv"), "--lexicon", p("lexicon.txt"),
                 "--seed", "2", "--output", p("aug.csv")})
                .code == 0);
  }

  Run train(const std::string& manifest) const {
    return run({"train", "--train", p("aug.csv"), "--config", p("run.ini"), "--mock-seed",
                "1", "--mock-seed", "2", "--mock-seed", "3", "--seq-len", "4", "--seq-len",
                "8", "--out-manifest", manifest});
  }
};

}  // namespace

TEST_CASE("social masks") {
  CHECK(mask_feature_names(social_mask("text_only")) == std::vector<std::string>{"text_embedding"});
  CHECK(mask_feature_names(social_mask("post_features")).size() == 4);
  CHECK(mask_feature_names(social_mask("user_post_polarity")).back() == "user_post_polarity");
  CHECK(mask_feature_names(social_mask("all")).size() == 6);
  CHECK_THROWS_AS(social_mask("bogus"), std::invalid_argument);
}

TEST_CASE("embedding source strings") {
  const auto s = EmbeddingSource::parse("mock:7:16:0");
  CHECK(s.mock);
  CHECK(s.seed == 7);
  CHECK(s.dim == 16);
  CHECK_FALSE(s.transliterated);
  CHECK(s.to_string() == "mock:7:16:0");
  CHECK_FALSE(EmbeddingSource::parse("/data/m.aemb").mock);
  CHECK_THROWS_AS(EmbeddingSource::parse("mock:x"), ConfigError);
}

TEST_CASE("run configuration") {
  TempDir dir;
  write_text(dir / "lex.txt", "pagal\n");
  const auto cfg = load_run_config(write_text(
      dir / "c.ini", "[features]\nlexicon = lex.txt\nmask = rrt\n[train]\nepochs = 3\n"));
  CHECK(cfg.lexicon == dir / "lex.txt");
  CHECK(cfg.mask == "rrt");
  CHECK(cfg.train.epochs == 3);
  CHECK(cfg.uses_transliteration("muril"));
  CHECK_FALSE(cfg.uses_transliteration("xlmr"));
  CHECK_THROWS_AS(load_run_config(write_text(dir / "bad.ini", "[train]\nepochs = many\n")),
                  ConfigError);
  CHECK_THROWS_AS(load_run_config(dir / "none.ini"), ConfigError);
}

TEST_CASE("column mapping from the run configuration") {
  TempDir dir;
  write_text(dir / "raw.tsv", "id\tbody\tthread\tlang\n7\tHello  World!!\tq1\tbn\n");
  write_text(dir / "c.ini",
             "[columns]\ndelimiter = tab\ncomment_id = id\nraw_text = body\n"
             "post_id = thread\nlanguage = lang\nlike_count_comment =\n"
             "report_count_comment =\nlike_count_post =\nreport_count_post =\n");
  REQUIRE(run({"preprocess", "--input", (dir / "raw.tsv").string(), "--config",
               (dir / "c.ini").string(), "--output", (dir / "out.csv").string()})
              .code == 0);
  const auto ds = load_dataset(dir / "out.csv").dataset;
  REQUIRE(ds.size() == 1);
  CHECK(ds[0].comment_id == "7");
  CHECK(ds[0].text == "hello world");
  CHECK(ds[0].post_id == "q1");
  CHECK(ds[0].language == "bn");

  write_text(dir / "bad.ini", "[columns]\nformat = xml\n");
  CHECK_THROWS_AS(load_run_config(dir / "bad.ini"), ConfigError);
}

TEST_CASE("exit codes") {
  TempDir dir;
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"preprocess", "--input", (dir / "missing.csv").string(), "--output",
             (dir / "o.csv").string()})
            .code == 1);
  write_text(dir / "d.csv", "comment_id,text,post_id\n1,hi,p\n");
  CHECK(run({"preprocess", "--input", (dir / "d.csv").string(), "--config",
             (dir / "none.ini").string(), "--output", (dir / "o.csv").string()})
            .code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"evaluate", "--predictions", (dir / "d.csv").string()}).code == 2);
}

TEST_CASE("pipeline through the command line") {
  Workspace ws;
  const Run trained = ws.train(ws.p("model/manifest.csv"));
  REQUIRE(trained.code == 0);
  const auto manifest = read_manifest(ws.p("model/manifest.csv"));
  CHECK(manifest.entries.size() == 6);
  CHECK(std::filesystem::exists(ws.dir / "model" / "pre_classifier.amdl"));
  CHECK(trained.err.find("epoch") != std::string::npos);

  SUBCASE("retraining reproduces checkpoints") {
    REQUIRE(ws.train(ws.p("again/manifest.csv")).code == 0);
    for (int k = 0; k < 6; ++k) {
      const std::string name = "member_" + std::to_string(k) + ".amdl";
      CHECK(read_text(ws.dir / "model" / name) == read_text(ws.dir / "again" / name));
    }
  }

  SUBCASE("predict, evaluate, correlate") {
    REQUIRE(run({"predict", "--manifest", ws.p("model/manifest.csv"), "--input",
                 ws.p("test.csv"), "--output", ws.p("pred.csv"), "--trace", ws.p("trace.csv")})
                .code == 0);
    const std::size_t n = line_count(read_text(ws.dir / "test.csv")) - 1;
    const std::string preds = read_text(ws.dir / "pred.csv");
    CHECK(preds.starts_with("comment_id,label,probability,decision\n"));
    CHECK(line_count(preds) == n + 1);
    CHECK(line_count(read_text(ws.dir / "trace.csv")) == 6 * n + 1);

    REQUIRE(run({"predict", "--manifest", ws.p("model/manifest.csv"), "--input",
                 ws.p("test.csv"), "--output", ws.p("pred2.csv")})
                .code == 0);
    CHECK(read_text(ws.dir / "pred2.csv") == preds);

    const Run eval = run({"evaluate", "--predictions", ws.p("pred.csv"), "--labels",
                          ws.p("test.csv"), "--by-language"});
    REQUIRE(eval.code == 0);
    CHECK(eval.out.starts_with("language,n,acc,p,r,f1,flags\n"));
    for (const auto* lang : {"\nbn,", "\nhi,", "\nta,", "\nALL,"})
      CHECK(eval.out.find(lang) != std::string::npos);

    const Run corr = run({"correlate", "--input", ws.p("test.csv"), "--config",
                          ws.p("run.ini"), "--predictions", ws.p("pred.csv")});
    REQUIRE(corr.code == 0);
    CHECK(corr.out.starts_with("feature,r_pb\n"));
    CHECK(corr.out.find("contextual_embeddings,") != std::string::npos);
  }

  SUBCASE("missing embedding file names the member") {
    std::vector<std::string> args{"train", "--train", ws.p("aug.csv"), "--config",
                                  ws.p("run.ini"), "--seq-len", "4", "--seq-len", "8",
                                  "--out-manifest", ws.p("files/manifest.csv")};
    for (int k = 0; k < 6; ++k) {
      args.push_back("--embeddings");
      args.push_back(ws.p("emb" + std::to_string(k) + ".aemb"));
    }
    const Run r = run(args);
    CHECK(r.code == 2);
    CHECK(r.err.find("muril/4") != std::string::npos);
  }

  SUBCASE("divergence exits with 3") {
    write_text(ws.dir / "wild.ini",
               "[features]\nlexicon = lexicon.txt\n[train]\nepochs = 3\ntoken_dim = 8\n"
               "text_hidden = 8\njoint_hidden = 4\nlearning_rate = 1e300\n");
    const Run r = run({"train", "--train", ws.p("aug.csv"), "--config", ws.p("wild.ini"),
                       "--mock-seed", "1", "--mock-seed", "2", "--mock-seed", "3",
                       "--seq-len", "4", "--seq-len", "8", "--out-manifest",
                       ws.p("wild/manifest.csv")});
    CHECK(r.code == 3);
  }
}
