#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "unimod.hpp"

namespace unimod {
namespace {

std::string write_temp(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path.string();
}

TEST(Functions, PowerPsi) {
  const PsiFunction psi = PsiFunction::power(0.9);
  EXPECT_DOUBLE_EQ(psi(10.0), 0.09);
  EXPECT_DOUBLE_EQ(psi.gap(10.0), 1.0 - 0.9);
  EXPECT_EQ(psi.t0(), 1.0);
  EXPECT_EQ(psi.describe(), "psi:pow:a=0.9");
  EXPECT_THROW(psi(0.5), DomainError);
  EXPECT_THROW(PsiFunction::power(0.0), ArgumentError);
}

TEST(Functions, LogCorrectedPsiStartsWhereItIsWellBehaved) {
  const PsiFunction psi = PsiFunction::mod1(1.0);
  EXPECT_GT(psi.t0(), 1.0);
  EXPECT_GT(psi(psi.t0()), 0.0);
  EXPECT_NEAR(psi(1e6), (1.0 - 1.0 / std::log(1e6)) / 1e6, 1e-20);
  EXPECT_TRUE(validate_psi(psi).ok()) << validate_psi(psi).summary();
  EXPECT_TRUE(validate_psi(PsiFunction::mod2(1.0, 0.5)).ok());
}

TEST(Functions, ParsePsiSpecs) {
  EXPECT_EQ(parse_psi("psi:pow:a=0.5").describe(), "psi:pow:a=0.5");
  EXPECT_EQ(parse_psi("pow:a=0.5").describe(), "psi:pow:a=0.5");
  EXPECT_EQ(parse_psi("psi:pow:a=0.5,t0=10").t0(), 10.0);
  EXPECT_EQ(parse_psi("psi:mod2:k=2,gamma=0.5").family(), PsiFunction::Family::mod2);
  EXPECT_THROW(parse_psi("psi:pow:b=1"), ArgumentError);
  EXPECT_THROW(parse_psi("psi:sqrt:a=1"), ArgumentError);
  EXPECT_THROW(parse_psi("psi"), ArgumentError);
  EXPECT_THROW(parse_psi("psi:pow:a=0.5,t0=0.5"), ArgumentError);
}

TEST(Functions, RateFamilies) {
  EXPECT_DOUBLE_EQ(RateFunction::constant(0.2)(5.0), 0.2);
  const RateFunction p = RateFunction::power(1.0);
  EXPECT_EQ(p.s0(), 1.0);
  EXPECT_DOUBLE_EQ(p(4.0), 0.25);
  EXPECT_THROW(p(0.5), DomainError);
  const RateFunction l = RateFunction::logpow(1.0, 1.0);
  EXPECT_NEAR(l(100.0), std::log(100.0) / 100.0, 1e-16);
  EXPECT_NEAR(RateFunction::exponential(0.5)(2.0), std::exp(-1.0), 1e-16);
  for (const RateFunction& r : {p, l, RateFunction::constant(0.3), RateFunction::exponential(0.5),
                                RateFunction::power(2.0, 3.0)}) {
    EXPECT_TRUE(validate_rate(r).ok()) << r.describe() << ": " << validate_rate(r).summary();
  }
}

TEST(Functions, ParseRateSpecs) {
  EXPECT_EQ(parse_rate("rate:pow:alpha=1").describe(), "rate:pow:alpha=1");
  EXPECT_EQ(parse_rate("rate:const:c=0.2").describe(), "rate:const:c=0.2");
  EXPECT_EQ(parse_rate("const:c=0.2,s0=3").s0(), 3.0);
  EXPECT_EQ(parse_rate("rate:logpow:alpha=1,beta=2").family(), RateFunction::Family::logpow);
  EXPECT_EQ(parse_rate("rate:exp:lambda=0.5").family(), RateFunction::Family::exponential);
  EXPECT_THROW(parse_rate("rate:pow:c=1"), ArgumentError);
  EXPECT_THROW(parse_rate("rate:const:c=-1"), ArgumentError);
  EXPECT_THROW(parse_rate("rate:weird:c=1"), ArgumentError);
}

TEST(Functions, TablesFromFiles) {
  const std::string psi_path = write_temp("unimod_psi_table.csv", "t,psi\n1,0.9\n10,0.09\n100,0.009\n");
  const PsiFunction psi = parse_psi("psi:tab:" + psi_path);
  EXPECT_NEAR(psi(31.6227766016838), 0.9 / 31.6227766016838, 1e-12);  // exact in log-log
  EXPECT_THROW(psi(200.0), DomainError);
  const std::string rate_path = write_temp("unimod_rate_table.csv", "# comment\n0,0.5\n2,0.3\n");
  const RateFunction rate = parse_rate("rate:tab:" + rate_path);
  EXPECT_NEAR(rate(1.0), 0.4, 1e-15);
  const std::string bad = write_temp("unimod_bad_table.csv", "1,2\n1,3\n");
  EXPECT_THROW(parse_rate("rate:tab:" + bad), ArgumentError);
  EXPECT_THROW(parse_rate("rate:tab:/nonexistent/file.csv"), ArgumentError);
}

TEST(Functions, ValidationFlagsBrokenFunctions) {
  const auto big = validate_psi(PsiFunction::power(1.1));
  ASSERT_FALSE(big.ok());
  EXPECT_EQ(big.violations.front().condition, "t-psi-below-one");
  const std::string falling = write_temp("unimod_falling.csv", "1,0.5\n10,0.04\n100,0.003\n");
  const auto report = validate_psi(parse_psi("psi:tab:" + falling));
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations.front().condition, "t-psi-non-decreasing");
  // s + 2 e^{-3 s} decreases near 0.
  const auto fast = validate_rate(RateFunction::exponential(3.0, 2.0));
  ASSERT_FALSE(fast.ok());
  EXPECT_EQ(fast.violations.front().condition, "s-plus-rate-non-decreasing");
  const std::string up = write_temp("unimod_up.csv", "0,0.1\n1,0.2\n");
  EXPECT_EQ(validate_rate(parse_rate("rate:tab:" + up)).violations.front().condition, "rate-non-increasing");
}

}  // namespace
}  // namespace unimod
