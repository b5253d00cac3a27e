#include <doctest.h>

#include <algorithm>
#include <set>

#include "abuse/corpus.hpp"
#include "abuse/error.hpp"
#include "support.hpp"

using namespace abuse;
using testing::TempDir;
using testing::write_text;

namespace {

const char* kHeader =
    "comment_id,raw_text,user_id,post_id,like_count_comment,report_count_comment,"
    "like_count_post,report_count_post,language,label\n";

std::vector<Comment> labeled(std::size_t n_pos, std::size_t n_neg) {
  std::vector<Comment> out;
  for (std::size_t i = 0; i < n_pos + n_neg; ++i) {
    out.push_back(testing::comment("c" + std::to_string(i), "t", "p", std::nullopt,
                                   i < n_pos ? 1 : 0));
  }
  return out;
}

}  // namespace

TEST_CASE("rows with missing text are dropped and counted") {
  TempDir dir;
  const auto path = write_text(dir / "d.csv", std::string(kHeader) +
                                                  "1,hello,u1,p1,0,0,5,1,hi,0\n"
                                                  "2,,u1,p1,0,0,5,1,hi,1\n"
                                                  "3,\"a, quoted\",u2,p1,1,1,5,1,hi,1\n"
                                                  "4,there,,p2,2,0,3,0,bn,0\n");
  const auto r = load_dataset(path);
  CHECK(r.dataset.size() == 3);
  CHECK(r.report.missing_text == 1);
  CHECK(r.report.dropped() == 1);
  CHECK(r.dataset[1].raw_text == "a, quoted");
  CHECK_FALSE(r.dataset[2].user_id.has_value());
}

TEST_CASE("every valid row is kept") {
  TempDir dir;
  const auto path = write_text(dir / "d.csv", std::string(kHeader) +
                                                  "1,a,u1,p1,0,0,0,0,hi,0\n"
                                                  "2,b,u1,p1,0,0,0,0,hi,1\n");
  CHECK(load_dataset(path).dataset.size() == 2);
}

TEST_CASE("post and user groupings partition the comments") {
  TempDir dir;
  const auto path = write_text(dir / "d.csv", std::string(kHeader) +
                                                  "1,a,u1,p1,0,0,0,0,hi,0\n"
                                                  "2,b,u2,p1,0,0,0,0,hi,1\n"
                                                  "3,c,u1,p1,0,0,0,0,hi,0\n"
                                                  "4,d,,p2,0,0,0,0,hi,1\n"
                                                  "5,e,u3,p2,0,0,0,0,hi,0\n");
  const Dataset ds = load_dataset(path).dataset;
  REQUIRE(ds.by_post().size() == 2);
  CHECK(ds.by_post().at("p1").size() == 3);
  CHECK(ds.by_post().at("p2").size() == 2);
  std::size_t users = 0;
  for (const auto& [u, idx] : ds.by_user()) users += idx.size();
  CHECK(users == 4);
  CHECK(ds.by_user().at("u1") == std::vector<std::size_t>{0, 2});
}

TEST_CASE("malformed counts, bad labels and duplicates are reported") {
  TempDir dir;
  const auto path = write_text(dir / "d.csv", std::string(kHeader) +
                                                  "1,a,u1,p1,x,0,0,0,hi,0\n"
                                                  "2,b,u1,p1,-1,0,0,0,hi,0\n"
                                                  "3,c,u1,p1,0,0,0,0,hi,2\n"
                                                  "4,d,u1,p1,0,0,0,0,hi,1\n"
                                                  "4,e,u1,p1,0,0,0,0,hi,1\n"
                                                  "5,f,u1,,0,0,0,0,hi,1\n");
  const auto r = load_dataset(path);
  CHECK(r.dataset.size() == 1);
  CHECK(r.report.malformed_count == 2);
  CHECK(r.report.malformed_label == 1);
  CHECK(r.report.duplicate_id == 1);
  CHECK(r.report.missing_field == 1);
  CHECK(r.dataset[0].raw_text == "d");
}

TEST_CASE("loading errors") {
  TempDir dir;
  CHECK_THROWS_AS(load_dataset(dir / "absent.csv"), IoError);
  const auto empty = write_text(dir / "e.csv", std::string(kHeader) + "1,,u,p,0,0,0,0,hi,0\n");
  CHECK_THROWS_AS(load_dataset(empty), DataError);
  const auto no_col = write_text(dir / "n.csv", "comment_id,raw_text\n1,a\n");
  CHECK_THROWS_AS(load_dataset(no_col), DataError);
}

TEST_CASE("json lines input and custom column names") {
  TempDir dir;
  const auto path = write_text(
      dir / "d.jsonl",
      "{\"id\":\"a\",\"body\":\"hi there\",\"post\":\"p\",\"lc\":1,\"rc\":2,\"lp\":3,\"rp\":4,"
      "\"label\":1}\n"
      "not json\n"
      "{\"id\":\"b\",\"body\":\"x\",\"post\":\"p\",\"lc\":1,\"rc\":2,\"lp\":3,\"rp\":4}\n");
  ColumnSchema s;
  s.format = InputFormat::json_lines;
  s.comment_id = "id";
  s.raw_text = "body";
  s.post_id = "post";
  s.like_count_comment = "lc";
  s.report_count_comment = "rc";
  s.like_count_post = "lp";
  s.report_count_post = "rp";
  const auto r = load_dataset(path, s);
  REQUIRE(r.dataset.size() == 2);
  CHECK(r.dataset[0].report_count_post == 4);
  CHECK(r.dataset[0].label == 1);
  CHECK_FALSE(r.dataset[1].label.has_value());
  CHECK(r.dataset[0].language == "und");
  CHECK_FALSE(r.report.warnings.empty());
}

TEST_CASE("save then load round-trips, and loading is idempotent") {
  TempDir dir;
  auto a = testing::comment("x,1", "say \"hi\"\nnext", "p1", "u1", 1);
  a.synthetic = true;
  a.report_count_post = 7;
  auto b = testing::comment("x2", "plain", "p2", std::nullopt, std::nullopt, "bn");
  const Dataset ds({a, b});
  save_dataset(ds, dir / "out.csv");
  const Dataset back = load_dataset(dir / "out.csv").dataset;
  CHECK(back == ds);
  CHECK(load_dataset(dir / "out.csv").dataset == back);
}

TEST_CASE("split sizes and determinism") {
  const Dataset ds(labeled(50, 50));
  const auto [train, test] = split(ds, 0.2, 7);
  CHECK(train.size() == 80);
  CHECK(test.size() == 20);
  const auto [train2, test2] = split(ds, 0.2, 7);
  CHECK(train2 == train);
  CHECK(test2 == test);

  std::set<std::string> ids;
  for (const auto& c : train.comments()) ids.insert(c.comment_id);
  for (const auto& c : test.comments()) CHECK(ids.insert(c.comment_id).second);
  CHECK(ids.size() == 100);
}

TEST_CASE("split is stratified by label") {
  const Dataset ds(labeled(5, 5));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [train, test] = split(ds, 0.2, seed);
    REQUIRE(test.size() == 2);
    CHECK(std::count_if(test.comments().begin(), test.comments().end(),
                        [](const Comment& c) { return c.label == 1; }) == 1);
  }
}

TEST_CASE("split rejects fractions outside (0,1)") {
  const Dataset ds(labeled(2, 2));
  CHECK_THROWS_AS(split(ds, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(ds, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(split(Dataset{}, 0.5, 1), std::invalid_argument);
}

TEST_CASE("delimited parsing handles quotes and CRLF") {
  const auto rows = parse_delimited("a,\"b,\"\"c\"\"\"\r\nd,e\n", ',');
  REQUIRE(rows.size() == 2);
  CHECK(rows[0][1] == "b,\"c\"");
  CHECK(rows[1][0] == "d");
  CHECK(quote_field("plain", ',') == "plain");
  CHECK(quote_field("a,b", ',') == "\"a,b\"");
}
