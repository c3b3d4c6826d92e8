#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cgr/sequence_sources.hpp"
#include "cgr/source_spec.hpp"
#include "cgr/splitmix64.hpp"

using namespace cgr;

namespace {

const std::string kDataDir = CGR_TEST_DATA_DIR;

std::vector<std::uint32_t> fasta_symbols(const std::string& text) {
  std::istringstream is(text);
  auto records = parse_fasta(is, dna_alphabet());
  REQUIRE(records.size() == 1);
  return records[0].sequence.symbols;
}

/// Rebuilds p/q from partial quotients via the convergent recurrences.
Rational cf_to_rational(const std::vector<BigInt>& terms) {
  BigInt h_prev = 1, h = terms.at(0);
  BigInt k_prev = 0, k = 1;
  for (std::size_t i = 1; i < terms.size(); ++i) {
    BigInt h_next = terms[i] * h + h_prev;
    BigInt k_next = terms[i] * k + k_prev;
    h_prev = h;
    h = h_next;
    k_prev = k;
    k = k_next;
  }
  return Rational(h, k);
}

}  // namespace

TEST_CASE("DNA alphabet maps the four bases and U") {
  AlphabetMap map = dna_alphabet();
  std::uint32_t idx = 99;
  REQUIRE(map.lookup('A', idx));
  CHECK(idx == 0);
  REQUIRE(map.lookup('c', idx));
  CHECK(idx == 1);
  REQUIRE(map.lookup('G', idx));
  CHECK(idx == 2);
  REQUIRE(map.lookup('t', idx));
  CHECK(idx == 3);
  REQUIRE(map.lookup('U', idx));
  CHECK(idx == 3);
  CHECK_FALSE(map.lookup('N', idx));
  CHECK(map.vertex_labels == std::vector<std::string>{"A", "C", "G", "T"});
}

TEST_CASE("protein alphabet covers the 20 codes in table order") {
  AlphabetMap map = protein_alphabet();
  CHECK(map.alphabet_size() == 20);
  const std::string codes = "ARNDCQEGHILKMFPSTWYV";
  for (std::uint32_t i = 0; i < 20; ++i) {
    std::uint32_t idx = 99;
    REQUIRE(map.lookup(codes[i], idx));
    REQUIRE(idx == i);
  }
  std::uint32_t idx;
  CHECK_FALSE(map.lookup('B', idx));
  CHECK_FALSE(map.lookup('Z', idx));
}

TEST_CASE("FASTA parsing maps GAATT as in the walkthrough") {
  CHECK(fasta_symbols(">x\nGAATT\n") ==
        std::vector<std::uint32_t>{2, 0, 0, 3, 3});
}

TEST_CASE("FASTA records with no admissible symbols are an error") {
  std::istringstream empty_record(">x\n");
  CHECK_THROWS_AS(parse_fasta(empty_record, dna_alphabet()), ParseError);
  std::istringstream no_records("");
  CHECK_THROWS_AS(parse_fasta(no_records, dna_alphabet()), ParseError);
  std::istringstream headerless("GAATT\n");
  CHECK_THROWS_AS(parse_fasta(headerless, dna_alphabet()), ParseError);
}

TEST_CASE("FASTA skips inadmissible characters and counts them") {
  std::istringstream is(">x\nGANNAT\n");
  auto records = parse_fasta(is, dna_alphabet());
  REQUIRE(records.size() == 1);
  CHECK(records[0].sequence.symbols == std::vector<std::uint32_t>{2, 0, 0, 3});
  CHECK(records[0].skipped == 2);
}

TEST_CASE("FASTA handles multiple records, case and line wrapping") {
  std::istringstream is(">first record\nga\natt\n>second\nTTTT\ncc\n");
  auto records = parse_fasta(is, dna_alphabet());
  REQUIRE(records.size() == 2);
  CHECK(records[0].header == "first record");
  CHECK(records[0].sequence.symbols ==
        std::vector<std::uint32_t>{2, 0, 0, 3, 3});
  CHECK(records[1].sequence.symbols ==
        std::vector<std::uint32_t>{3, 3, 3, 3, 1, 1});
}

TEST_CASE("b-files parse indexed values with comments") {
  std::istringstream is("1 3\n2 1\n3 4\n");
  CHECK(parse_oeis_bfile(is) == std::vector<BigInt>{3, 1, 4});

  std::istringstream commented("# c\n1 0\n");
  CHECK(parse_oeis_bfile(commented) == std::vector<BigInt>{0});

  std::istringstream negative("0 -5\n1 12345678901234567890123456789\n");
  auto vals = parse_oeis_bfile(negative);
  CHECK(vals[0] == -5);
  CHECK(vals[1] == BigInt("12345678901234567890123456789"));
}

TEST_CASE("b-files reject gaps and malformed lines") {
  std::istringstream gap("1 3\n3 4\n");
  CHECK_THROWS_AS(parse_oeis_bfile(gap), ParseError);
  std::istringstream bad("1 x\n");
  CHECK_THROWS_AS(parse_oeis_bfile(bad), ParseError);
  std::istringstream none("# only comments\n");
  CHECK_THROWS_AS(parse_oeis_bfile(none), ParseError);
}

TEST_CASE("a pi-digit b-file round-trips through the parser") {
  std::string decimal = read_digit_file(kDataDir + "/" + kPiDigitFile);
  std::vector<std::uint64_t> digits = digit_values(decimal);
  REQUIRE(digits.size() == 100000);
  std::ostringstream bfile;
  for (std::size_t i = 0; i < 50000; ++i)
    bfile << (i + 1) << ' ' << digits[i] << '\n';
  std::istringstream is(bfile.str());
  auto values = parse_oeis_bfile(is);
  REQUIRE(values.size() == 50000);
  CHECK(values[0] == 3);
  CHECK(values[1] == 1);
  CHECK(values[2] == 4);
}

TEST_CASE("digits_mod reduces values into the alphabet") {
  std::vector<BigInt> values{3, 1, 4, 1, 5};
  CHECK(digits_mod(values, 4).symbols ==
        std::vector<std::uint32_t>{3, 1, 0, 1, 1});
  CHECK(digits_mod(values, 10).symbols ==
        std::vector<std::uint32_t>{3, 1, 4, 1, 5});
  CHECK(digits_mod(std::vector<BigInt>{-1, -7}, 4).symbols ==
        std::vector<std::uint32_t>{3, 1});
  CHECK_THROWS_AS(digits_mod(values, 1), ContractError);
}

TEST_CASE("pi digits mod 4 land unevenly on the corners") {
  std::string decimal = read_digit_file(kDataDir + "/" + kPiDigitFile);
  std::vector<std::uint64_t> digits = digit_values(decimal);
  digits.resize(50000);
  SymbolSequence seq = digits_mod(digits, 4);
  std::vector<std::size_t> counts(4, 0);
  for (std::uint32_t s : seq.symbols) ++counts[s];
  // Digits 0..9 mod 4 hit residues 0 and 1 via three digits each but 2 and
  // 3 via only two, so the expected split is (0.3, 0.3, 0.2, 0.2).
  const double expected[4] = {0.3, 0.3, 0.2, 0.2};
  for (int r = 0; r < 4; ++r) {
    double freq = static_cast<double>(counts[r]) / 50000.0;
    CHECK(std::fabs(freq - expected[r]) < 0.01);
  }
}

TEST_CASE("fibonacci_mod starts 1,1 and reduces without overflow") {
  CHECK(fibonacci_mod(10, 10).symbols ==
        std::vector<std::uint32_t>{1, 1, 2, 3, 5, 8, 3, 1, 4, 5});
  SymbolSequence big = fibonacci_mod(3000, 10);
  CHECK(big.symbols.size() == 3000);
  for (std::uint32_t s : big.symbols) REQUIRE(s < 10);
  CHECK_THROWS_AS(fibonacci_mod(0, 10), ContractError);
  CHECK_THROWS_AS(fibonacci_mod(5, 1), ContractError);
}

TEST_CASE("fibonacci_mod agrees with big-integer reduction up to n = 300") {
  for (std::uint64_t m : {10ULL, 7ULL}) {
    SymbolSequence seq = fibonacci_mod(300, m);
    BigInt a = 1, b = 1;
    for (std::size_t i = 0; i < 300; ++i) {
      REQUIRE(seq.symbols[i] == static_cast<std::uint32_t>(a % m));
      BigInt next = a + b;
      a = b;
      b = next;
    }
  }
}

TEST_CASE("fibonacci mod 10 has Pisano period 60") {
  SymbolSequence seq = fibonacci_mod(200, 10);
  // Cycle detection on consecutive pairs: the first recurrence of the
  // initial pair (1, 1) marks the period.
  std::size_t period = 0;
  for (std::size_t i = 1; i + 1 < seq.symbols.size(); ++i) {
    if (seq.symbols[i] == 1 && seq.symbols[i + 1] == 1) {
      period = i;
      break;
    }
  }
  CHECK(period == 60);
  for (std::size_t i = 0; i + 60 < seq.symbols.size(); ++i)
    REQUIRE(seq.symbols[i] == seq.symbols[i + 60]);
}

TEST_CASE("primes enumerates in order with offset support") {
  CHECK(primes(20) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19});
  CHECK(primes(1000000).size() == 78498);
  CHECK(primes(1000, 103).front() == 569);
  CHECK_THROWS_AS(primes(1), ContractError);
  CHECK_THROWS_AS(primes(200000000ULL), ContractError);
}

TEST_CASE("sieve output agrees with trial division") {
  std::vector<std::uint64_t> sieved = primes(10000);
  std::size_t idx = 0;
  for (std::uint64_t n = 2; n <= 10000; ++n) {
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= n; ++d)
      if (n % d == 0) {
        prime = false;
        break;
      }
    if (prime) {
      REQUIRE(idx < sieved.size());
      REQUIRE(sieved[idx] == n);
      ++idx;
    }
  }
  REQUIRE(idx == sieved.size());
}

TEST_CASE("prime residue streams avoid even classes") {
  // Skipping the prime 2, odd primes mod 8 only land on 1, 3, 5, 7.
  SymbolSequence mod8 = digits_mod(primes(100000, 1), 8);
  for (std::uint32_t s : mod8.symbols)
    REQUIRE((s == 1 || s == 3 || s == 5 || s == 7));
  SymbolSequence mod4 = digits_mod(primes(100000, 1), 4);
  for (std::uint32_t s : mod4.symbols) REQUIRE((s == 1 || s == 3));
}

TEST_CASE("rationals normalize sign and reduce") {
  Rational r(BigInt(6), BigInt(-4));
  CHECK(r.num == -3);
  CHECK(r.den == 2);
  CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), ContractError);
}

TEST_CASE("rational continued fractions match published expansions") {
  CHECK(cf_partial_quotients_rational(Rational(9, 7)) ==
        std::vector<BigInt>{1, 3, 2});
  CHECK(cf_partial_quotients_rational(Rational(9, 7), SIZE_MAX, true) ==
        std::vector<BigInt>{1, 3, 1, 1});
  CHECK(cf_partial_quotients_rational(Rational(1, 1)) ==
        std::vector<BigInt>{1});
  CHECK(cf_partial_quotients_rational(Rational(355, 113)) ==
        std::vector<BigInt>{3, 7, 16});
}

TEST_CASE("continued fractions reconstruct the original rational") {
  SplitMix64 rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    BigInt num = static_cast<std::uint64_t>(rng.next_below(1000000) + 1);
    BigInt den = static_cast<std::uint64_t>(rng.next_below(1000000) + 1);
    Rational x(num, den);
    Rational canonical = cf_to_rational(cf_partial_quotients_rational(x));
    CHECK(canonical.num == x.num);
    CHECK(canonical.den == x.den);
    Rational split_form =
        cf_to_rational(cf_partial_quotients_rational(x, SIZE_MAX, true));
    CHECK(split_form.num == x.num);
    CHECK(split_form.den == x.den);
  }
}

TEST_CASE("canonical expansions end with a quotient above one") {
  SplitMix64 rng(778);
  for (int trial = 0; trial < 200; ++trial) {
    BigInt num = static_cast<std::uint64_t>(rng.next_below(100000) + 1);
    BigInt den = static_cast<std::uint64_t>(rng.next_below(100000) + 1);
    auto terms = cf_partial_quotients_rational(Rational(num, den));
    if (terms.size() > 1) REQUIRE(terms.back() >= 2);
  }
}

TEST_CASE("decimal continued fraction certifies only agreeing terms") {
  // 1.5 means 1.5 +- 0.05: the two endpoint expansions already disagree at
  // the second term, so only a0 = 1 is certified.
  CHECK(cf_partial_quotients_decimal("1.5") == std::vector<BigInt>{1});
  // A plain integer is certified +- 0.5, too coarse for even a0.
  CHECK_THROWS_AS(cf_partial_quotients_decimal("3"), ContractError);
  CHECK_THROWS_AS(cf_partial_quotients_decimal("x"), ParseError);
}

TEST_CASE("pi expansion begins with the published quotients") {
  std::string decimal = read_digit_file(kDataDir + "/" + kPiDigitFile);
  decimal.resize(1001);  // '3.' plus 999 fractional digits
  auto terms = cf_partial_quotients_decimal(decimal);
  REQUIRE(terms.size() >= 10);
  std::vector<BigInt> prefix(terms.begin(), terms.begin() + 10);
  CHECK(prefix == std::vector<BigInt>{3, 7, 15, 1, 292, 1, 1, 1, 2, 1});
}

TEST_CASE("e expansion follows the 2,1,2k,1 pattern") {
  std::string decimal = read_digit_file(kDataDir + "/" + kEDigitFile);
  auto terms = cf_partial_quotients_decimal(decimal);
  REQUIRE(terms.size() >= 30);
  std::vector<BigInt> prefix(terms.begin(), terms.begin() + 12);
  CHECK(prefix == std::vector<BigInt>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8});
  CHECK(terms[0] == 2);
  for (std::size_t i = 1; i < 30; ++i) {
    if (i % 3 == 2)
      REQUIRE(terms[i] == BigInt(2 * ((i + 1) / 3)));
    else
      REQUIRE(terms[i] == 1);
  }
}

TEST_CASE("certified prefixes are true convergents of the decimal value") {
  // Every certified expansion must satisfy |x - h/k| < 1/k^2 with x taken
  // as the exact rational encoded by the digits.
  std::string decimal = read_digit_file(kDataDir + "/" + kEDigitFile);
  decimal.resize(60);
  auto terms = cf_partial_quotients_decimal(decimal);
  REQUIRE(terms.size() > 5);
  std::string digits_only;
  for (char ch : decimal)
    if (ch != '.') digits_only.push_back(ch);
  BigInt mantissa(digits_only);
  BigInt scale = 1;
  for (std::size_t i = 0; i < digits_only.size() - 1; ++i) scale *= 10;
  for (std::size_t len = 1; len <= terms.size(); ++len) {
    std::vector<BigInt> prefix(terms.begin(),
                               terms.begin() + static_cast<std::ptrdiff_t>(len));
    Rational conv = cf_to_rational(prefix);
    // |mantissa/scale - h/k| < 1/k^2 <=> |mantissa*k - h*scale| * k < scale * k^2 / k^2... cross-multiplied:
    BigInt lhs = mantissa * conv.den - conv.num * scale;
    if (lhs < 0) lhs = -lhs;
    REQUIRE(lhs * conv.den < scale);
  }
}

TEST_CASE("sqrt2 expansion is 1 followed by twos") {
  CHECK(cf_sqrt2(4) == std::vector<BigInt>{1, 2, 2, 2});
  CHECK(cf_sqrt2(1) == std::vector<BigInt>{1});
  CHECK_THROWS_AS(cf_sqrt2(0), ContractError);

  std::string decimal = read_digit_file(kDataDir + "/" + kSqrt2DigitFile);
  auto certified = cf_partial_quotients_decimal(decimal, 500);
  REQUIRE(certified.size() == 500);
  auto closed_form = cf_sqrt2(500);
  CHECK(certified == closed_form);
}

TEST_CASE("prng streams are deterministic and uniform") {
  SymbolSequence a = prng_stream(42, 1000, 4);
  SymbolSequence b = prng_stream(42, 1000, 4);
  CHECK(a.symbols == b.symbols);
  CHECK_THROWS_AS(prng_stream(1, 10, 1), ContractError);

  SymbolSequence big = prng_stream(0, 100000, 3);
  std::vector<std::size_t> counts(3, 0);
  for (std::uint32_t s : big.symbols) ++counts[s];
  for (std::size_t c : counts)
    CHECK(std::fabs(static_cast<double>(c) / 100000.0 - 1.0 / 3.0) < 0.01);
}

TEST_CASE("digit files load with headers stripped") {
  std::string pi = read_digit_file(kDataDir + "/" + kPiDigitFile);
  CHECK(pi.substr(0, 16) == "3.14159265358979");
  CHECK(digit_values(pi).size() == 100000);

  std::string sqrt2 = read_digit_file(kDataDir + "/" + kSqrt2DigitFile);
  CHECK(sqrt2.substr(0, 12) == "1.4142135623");
}

TEST_CASE("symbol sequences validate their alphabet bound") {
  SymbolSequence seq;
  seq.alphabet_size = 3;
  seq.symbols = {0, 1, 2, 3};
  CHECK_THROWS_AS(seq.validate(), ContractError);
}
