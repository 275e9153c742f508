#include <cmath>
#include <random>
#include <sstream>

#include "ctxsim/error.hpp"
#include "ctxsim/io.hpp"
#include "doctest.h"
#include "synthetic_corpus.hpp"

using namespace ctxsim;
using Rows = std::vector<std::vector<std::string>>;

TEST_CASE("nine significant digits") {
  CHECK(format_sig9(0.0) == "0");
  CHECK(format_sig9(-0.0) == "0");
  CHECK(format_sig9(1.0) == "1");
  CHECK(format_sig9(13.5) == "13.5");
  CHECK(format_sig9(1.0 / 3.0) == "0.333333333");
  CHECK(format_sig9(std::sqrt(0.1)) == "0.316227766");
  CHECK(format_sig9(-2.5e-12) == "-2.5e-12");
}

TEST_CASE("CSV quoting and parsing") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(parse_csv("a,b\r\n\"c,d\",\"e\"\"f\"\n") == Rows{{"a", "b"}, {"c,d", "e\"f"}});
  CHECK(parse_csv("x,\n") == Rows{{"x", ""}});
  CHECK(parse_csv("\"multi\nline\",z\n") == Rows{{"multi\nline", "z"}});
}

TEST_CASE("CSV rows round trip (property)") {
  const std::string alphabet = "ab,\"\n x'";
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::size_t> ch(0, alphabet.size() - 1), len(0, 6), cols(1, 5);
  for (int c = 0; c < 500; ++c) {
    Rows rows(1 + c % 4);
    for (auto& row : rows) {
      row.resize(cols(rng));
      for (auto& f : row)
        for (std::size_t k = len(rng); k > 0; --k) f += alphabet[ch(rng)];
    }
    // A lone empty field would serialize as a blank line.
    for (auto& row : rows)
      if (row.size() == 1 && row[0].empty()) row[0] = "a";
    std::ostringstream out;
    for (const auto& row : rows) write_csv_row(out, row);
    CHECK(parse_csv(out.str()) == rows);
  }
}

TEST_CASE("similarity matrix CSV round trip") {
  std::vector<std::string> labels{"joy", "odd,name", "fear"};
  SimilarityMatrix s(labels, SimilarityKind::normalized);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (std::size_t i = 0; i < 3; ++i) {
    s.set(i, i, 1.0);
    for (std::size_t j = i + 1; j < 3; ++j) s.set(i, j, u(rng));
  }
  const auto text = matrix_csv(s);
  CHECK(text.rfind("label,joy,\"odd,name\",fear\n", 0) == 0);
  auto back = parse_similarity_csv(text);
  CHECK(back.labels() == labels);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(back(i, j) == doctest::Approx(s(i, j)).epsilon(5e-9));
  CHECK(matrix_csv(back) == text);
}

TEST_CASE("similarity CSV validation") {
  CHECK_THROWS_AS(parse_similarity_csv("label,a,b\na,1,0\nb,0\n"), DataError);
  CHECK_THROWS_AS(parse_similarity_csv("label,a,b\na,1,0\nc,0,1\n"), DataError);
  CHECK_THROWS_AS(parse_similarity_csv("label,a,b\na,1,x\nb,0,1\n"), DataError);
  CHECK_THROWS_AS(parse_similarity_csv("label,a,b\na,1,0.5\nb,0.4,1\n"), DataError);
  CHECK_THROWS_AS(parse_similarity_csv(""), DataError);
  CHECK_NOTHROW(parse_similarity_csv("label,a,b\na,1,0.5\nb,0.5,1\n"));
}

TEST_CASE("SHA-256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("text files") {
  testing::TempDir tmp;
  const auto file = tmp / "a/b/c.txt";
  write_text_file(file, "hello\n");
  CHECK(read_text_file(file) == "hello\n");
  write_text_file(file, "bye");
  CHECK(read_text_file(file) == "bye");
  CHECK_FALSE(std::filesystem::exists(tmp / "a/b/c.txt.tmp"));
  CHECK_THROWS_AS(read_text_file(tmp / "missing.txt"), DataError);
}
