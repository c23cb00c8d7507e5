#include <cmath>
#include <filesystem>
#include <random>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "radarpr/retrieval.hpp"

using namespace radarpr;

namespace {

EssDescriptor make_desc(std::string session, std::int64_t frame, int count,
                        std::vector<double> v) {
  EssDescriptor d;
  d.session_id = std::move(session);
  d.frame_id = frame;
  d.cluster_count = count;
  d.v = std::move(v);
  return d;
}

// Random database with clustered vectors so near-duplicates exist and the
// count filter actually separates candidates.
std::vector<EssDescriptor> random_db(std::mt19937_64& rng, std::size_t n,
                                     int dim, int max_count) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, max_count);
  std::vector<EssDescriptor> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(static_cast<std::size_t>(dim));
    for (auto& x : v) x = std::floor(20.0 * u(rng));
    out.push_back(make_desc(i % 2 ? "odd" : "even",
                            static_cast<std::int64_t>(i), count(rng),
                            std::move(v)));
  }
  return out;
}

DescriptorDb build_db(const std::vector<EssDescriptor>& rows, int dim) {
  DescriptorDb db(dim);
  for (const auto& d : rows) db.insert(d);
  return db;
}

}  // namespace

TEST_CASE("l2_normalized produces unit vectors and flags zero input") {
  const auto n = l2_normalized(std::vector<double>{3.0, 4.0});
  REQUIRE(n.size() == 2);
  CHECK(n[0] == doctest::Approx(0.6));
  CHECK(n[1] == doctest::Approx(0.8));
  CHECK(l2_normalized(std::vector<double>{0.0, 0.0}).empty());
}

TEST_CASE("insert validates dimension and key uniqueness") {
  DescriptorDb db(3);
  db.insert(make_desc("a", 0, 1, {1, 2, 3}));
  CHECK_THROWS(db.insert(make_desc("a", 0, 2, {4, 5, 6})));  // duplicate key
  CHECK_THROWS(db.insert(make_desc("a", 1, 2, {4, 5})));     // wrong dim
  CHECK(db.size() == 1);
  CHECK_THROWS(DescriptorDb(0));
}

TEST_CASE("candidate filter keeps counts within the slack band") {
  DescriptorDb db(1);
  for (int i = 0; i < 10; ++i)
    db.insert(make_desc("a", i, i, {1.0}));
  const auto band = db.candidate_filter(5, 2);
  REQUIRE(band.size() == 5);  // counts 3..7
  CHECK(band.front() == 3);
  CHECK(band.back() == 7);
  CHECK(db.candidate_filter(5, 0).size() == 1);
  CHECK(db.candidate_filter(5, -1).empty());
  CHECK(db.candidate_filter(5, 100).size() == 10);
  // no overflow at the int extremes
  CHECK(db.candidate_filter(0, std::numeric_limits<int>::max()).size() == 10);
}

TEST_CASE("query matches the exhaustive oracle on random databases") {
  std::mt19937_64 rng(20240930);
  const auto rows = random_db(rng, 400, 16, 40);
  const DescriptorDb db = build_db(rows, 16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> count(0, 40);

  for (int p : {0, 1, 10, 100}) {
    for (int trial = 0; trial < 40; ++trial) {
      EssDescriptor q = make_desc("q", trial, count(rng), {});
      q.v.resize(16);
      for (auto& x : q.v) x = std::floor(20.0 * u(rng));
      const MatchResult got = db.query(q, p, 0.2);
      const MatchResult want = oracle::query(rows, q, p, 0.2);
      CHECK(got.matched == want.matched);
      CHECK(got.candidate == want.candidate);
      CHECK(got.distance == want.distance);  // bitwise, same numeric path
      CHECK(got.candidates_examined == want.candidates_examined);
    }
  }
}

TEST_CASE("distance ties resolve toward the lowest frame id") {
  DescriptorDb db(2);
  db.insert(make_desc("zz", 3, 5, {1.0, 0.0}));
  db.insert(make_desc("aa", 7, 5, {2.0, 0.0}));  // same direction, same cosine
  const MatchResult r = db.query(make_desc("q", 0, 5, {1.0, 0.0}), 10, 0.5);
  REQUIRE(r.candidate.has_value());
  CHECK(r.candidate->first == "zz");
  CHECK(r.candidate->second == 3);

  // equal frame ids fall back to the session id
  DescriptorDb db2(2);
  db2.insert(make_desc("zz", 3, 5, {1.0, 0.0}));
  db2.insert(make_desc("aa", 3, 5, {3.0, 0.0}));
  const MatchResult r2 = db2.query(make_desc("q", 0, 5, {1.0, 0.0}), 10, 0.5);
  REQUIRE(r2.candidate.has_value());
  CHECK(r2.candidate->first == "aa");
}

TEST_CASE("verification threshold is inclusive") {
  DescriptorDb db(2);
  db.insert(make_desc("a", 0, 0, {1.0, 1.0}));
  const EssDescriptor q = make_desc("q", 0, 0, {1.0, 0.0});
  const double d = cosine_distance(q.v, std::vector<double>{1.0, 1.0});
  const MatchResult at = db.query(q, 0, d);
  CHECK(at.matched);
  const MatchResult below = db.query(q, 0, d - 1e-12);
  CHECK_FALSE(below.matched);
  REQUIRE(below.candidate.has_value());  // nearest still reported
  CHECK(below.distance == d);
}

TEST_CASE("exclusion window hides in-session neighbors by frame id") {
  // Frame ids strided by 2, as a subsampled index produces: the window is
  // measured in frame ids, so it must not widen with the stride.
  DescriptorDb db(2);
  for (int i = 0; i < 9; ++i)
    db.insert(make_desc("s", 2 * i, 5, {1.0 + i, 1.0}));
  db.insert(make_desc("other", 100, 5, {1.0, 1.0}));

  const EssDescriptor q = make_desc("s", 8, 5, {5.0, 1.0});  // equals frame 8
  // window 2 around frame 8 hides frames 6, 8, 10 of session s
  ExclusionWindow excl{"s", 8, 2};
  const MatchResult r = db.query(q, 10, 1.0, excl);
  REQUIRE(r.candidate.has_value());
  CHECK_FALSE((r.candidate->first == "s" && r.candidate->second >= 6 &&
               r.candidate->second <= 10));
  CHECK(r.candidates_examined == 7);

  // negative window disables exclusion
  ExclusionWindow off{"s", 8, -1};
  CHECK(db.query(q, 10, 1.0, off).candidates_examined == 10);

  // exclusion is per session: the other session's entry stays
  ExclusionWindow wide{"s", 8, 100};
  const MatchResult r2 = db.query(q, 10, 1.0, wide);
  CHECK(r2.candidates_examined == 1);
  REQUIRE(r2.candidate.has_value());
  CHECK(r2.candidate->first == "other");
}

TEST_CASE("query agrees with the oracle under exclusion windows") {
  std::mt19937_64 rng(20240931);
  const auto rows = random_db(rng, 200, 8, 10);
  const DescriptorDb db = build_db(rows, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 30; ++trial) {
    EssDescriptor q = make_desc("q", trial, trial % 10, {});
    q.v.resize(8);
    for (auto& x : q.v) x = std::floor(10.0 * u(rng));
    ExclusionWindow excl{trial % 2 ? "odd" : "even", trial * 3 % 100, 5};
    const MatchResult got = db.query(q, 3, 0.3, excl);
    const MatchResult want = oracle::query(rows, q, 3, 0.3, excl);
    CHECK(got.matched == want.matched);
    CHECK(got.candidate == want.candidate);
    CHECK(got.distance == want.distance);
    CHECK(got.candidates_examined == want.candidates_examined);
  }
}

TEST_CASE("zero-norm stored vectors count as candidates but never match") {
  DescriptorDb db(2);
  db.insert(make_desc("a", 0, 5, {0.0, 0.0}));
  db.insert(make_desc("a", 1, 5, {1.0, 0.0}));
  const MatchResult r = db.query(make_desc("q", 0, 5, {1.0, 0.0}), 0, 0.5);
  CHECK(r.candidates_examined == 2);
  REQUIRE(r.candidate.has_value());
  CHECK(r.candidate->second == 1);

  // database of only zero vectors: candidates exist, no neighbor
  DescriptorDb db2(2);
  db2.insert(make_desc("a", 0, 5, {0.0, 0.0}));
  const MatchResult r2 = db2.query(make_desc("q", 0, 5, {1.0, 0.0}), 0, 0.5);
  CHECK(r2.candidates_examined == 1);
  CHECK_FALSE(r2.matched);
  CHECK_FALSE(r2.candidate.has_value());
}

TEST_CASE("zero-norm query reports candidates but abstains") {
  DescriptorDb db(2);
  db.insert(make_desc("a", 0, 5, {1.0, 0.0}));
  const MatchResult r = db.query(make_desc("q", 0, 5, {0.0, 0.0}), 0, 1.0);
  CHECK(r.candidates_examined == 1);
  CHECK_FALSE(r.matched);
  CHECK_FALSE(r.candidate.has_value());
}

TEST_CASE("empty candidate set abstains") {
  DescriptorDb db(2);
  db.insert(make_desc("a", 0, 50, {1.0, 0.0}));
  const MatchResult r = db.query(make_desc("q", 0, 5, {1.0, 0.0}), 3, 1.0);
  CHECK(r.candidates_examined == 0);
  CHECK_FALSE(r.matched);
  CHECK_FALSE(r.candidate.has_value());
  CHECK(std::isinf(r.distance));
}

TEST_CASE("matched implies candidate present within threshold") {
  std::mt19937_64 rng(20240932);
  const auto rows = random_db(rng, 100, 4, 5);
  const DescriptorDb db = build_db(rows, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    EssDescriptor q = make_desc("q", 0, trial % 6, {});
    q.v = {u(rng), u(rng), u(rng), u(rng)};
    const MatchResult r = db.query(q, 2, 0.1);
    if (r.matched) {
      REQUIRE(r.candidate.has_value());
      CHECK(r.distance <= 0.1);
    }
  }
}

TEST_CASE("queries after further inserts see the new rows") {
  DescriptorDb db(2);
  db.insert(make_desc("a", 0, 5, {1.0, 0.0}));
  CHECK(db.query(make_desc("q", 0, 5, {0.0, 1.0}), 0, 1.0).candidate->second ==
        0);
  // the bucket tree was built; a later insert must invalidate it
  db.insert(make_desc("a", 1, 5, {0.0, 1.0}));
  const MatchResult r = db.query(make_desc("q", 0, 5, {0.0, 1.0}), 0, 1.0);
  REQUIRE(r.candidate.has_value());
  CHECK(r.candidate->second == 1);
  CHECK(r.distance == 0.0);
}

TEST_CASE("save and load round trip the database and its config") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "radarpr_dbio";
  fs::create_directories(dir);
  const fs::path file = dir / "db.jsonl";

  DescriptorDb db(3);
  db.insert(make_desc("s1", 0, 2, {1, 2, 3}));
  db.insert(make_desc("s1", 5, 4, {4, 5, 6}));
  db.insert(make_desc("s2", 0, 2, {7, 8, 9}));
  RunConfig cfg;
  cfg.descriptor_size = 3;
  cfg.cluster_threshold = 7;
  cfg.verify_threshold = 0.25;
  cfg.session_dir = "/data/s1";
  db.save(file, cfg);
  CHECK(fs::exists(DescriptorDb::sidecar_path(file)));

  auto [back, cfg2] = DescriptorDb::load(file);
  CHECK(back.size() == 3);
  CHECK(cfg2.descriptor_size == 3);
  CHECK(cfg2.cluster_threshold == 7);
  CHECK(cfg2.verify_threshold == 0.25);
  CHECK(cfg2.session_dir == "/data/s1");
  CHECK(back.at(1).frame_id == 5);
  CHECK(back.at(2).session_id == "s2");

  // identical query behavior after reload
  const EssDescriptor q = make_desc("q", 0, 3, {4.0, 5.0, 6.1});
  const MatchResult a = db.query(q, 2, 0.5);
  const MatchResult b = back.query(q, 2, 0.5);
  CHECK(a.candidate == b.candidate);
  CHECK(a.distance == b.distance);
}
