#include <cmath>
#include <fstream>

#include <gtest/gtest.h>

#include "hccn/params.hpp"

using namespace hccn;

TEST(Units, DbmRoundTrip) {
  EXPECT_NEAR(dbm_to_watts(30), 1.0, 1e-15);
  EXPECT_NEAR(dbm_to_watts(50), 100.0, 1e-12);
  EXPECT_NEAR(dbm_to_watts(10), 0.01, 1e-17);
  for (double dbm : {-20.0, 0.0, 13.0, 46.0}) EXPECT_NEAR(watts_to_dbm(dbm_to_watts(dbm)), dbm, 1e-12);
  EXPECT_NEAR(db_to_linear(130), 1e13, 1e-2);
  EXPECT_NEAR(linear_to_db(db_to_linear(5)), 5, 1e-14);
}

TEST(Derive, ReferenceOperatingPoint) {
  const NetworkParams p = reference_params();
  const DerivedParams d = derive(p);
  EXPECT_NEAR(d.area, std::numbers::pi * 250000.0, 1e-6);
  EXPECT_NEAR(d.mean_ues_per_bs, 3.0, 1e-12);
  EXPECT_NEAR(d.eta_bs, 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(d.eta_ap, 1.0 / (120e-6 * d.area), 1e-15);
  EXPECT_NEAR(d.rho_bs, 100.0 / 3.0, 1e-10);
  EXPECT_NEAR(d.rho_ap, 0.01 * d.eta_ap, 1e-18);
  EXPECT_NEAR(d.noise_power, 1e-11, 1e-24);
}

// (c / (4 pi f))^2 at c = 3e8 m/s, f = 3.5 GHz, evaluated with 50-digit
// arithmetic.
TEST(Derive, ReferencePathGain) {
  const DerivedParams d = derive(reference_params());
  EXPECT_NEAR(d.beta0 / 4.65250333051551e-5, 1.0, 1e-13);
  EXPECT_EQ(d.beta0, d.delta0);
}

TEST(Validate, ReferencePointIsValid) {
  EXPECT_TRUE(validate(reference_params()).empty());
  EXPECT_TRUE(warnings(reference_params()).empty());
}

TEST(Validate, RejectsEachBrokenInvariant) {
  auto broken = [](auto mutate) {
    NetworkParams p = reference_params();
    mutate(p);
    return validate(p);
  };
  EXPECT_FALSE(broken([](NetworkParams& p) { p.lambda_bs = 0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.lambda_ap = -1; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.alpha_bs = 2.0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.alpha_ap = 2.0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.alpha_ap = 0.0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.lambda_ue = p.lambda_bs; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.antennas_bs = 0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.antennas_ap = 0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.radius = 0; }).empty());
  EXPECT_FALSE(broken([](NetworkParams& p) { p.snr_ref_db = INFINITY; }).empty());
}

TEST(Validate, WarnsWhenApPowerExceedsBsPower) {
  NetworkParams p = reference_params();
  p.power_ap = dbm_to_watts(60);
  EXPECT_TRUE(validate(p).empty());
  EXPECT_EQ(warnings(p).size(), 1u);
}

TEST(Config, KeysRoundTrip) {
  NetworkParams p = reference_params();
  for (const char* key : config_keys::kAll) {
    const double v = get_config_value(p, key);
    set_config_value(p, key, v);
  }
  const NetworkParams q = reference_params();
  EXPECT_NEAR(p.power_bs, q.power_bs, 1e-12);
  EXPECT_NEAR(p.lambda_ap, q.lambda_ap, 1e-18);
  EXPECT_EQ(p.antennas_bs, q.antennas_bs);
}

TEST(Config, JsonRoundTrip) {
  NetworkParams p = reference_params();
  set_config_value(p, "P_A_dBm", 20);
  set_config_value(p, "N_A", 4);
  const NetworkParams q = params_from_json(nlohmann::json::parse(params_to_json(p).dump()));
  for (const char* key : config_keys::kAll) EXPECT_NEAR(get_config_value(q, key), get_config_value(p, key), 1e-12) << key;
}

TEST(Config, MissingKeysKeepDefaults) {
  const NetworkParams p = params_from_json(nlohmann::json::parse(R"({"alpha2": 1.2})"));
  EXPECT_EQ(p.alpha_ap, 1.2);
  EXPECT_EQ(p.alpha_bs, reference_params().alpha_bs);
}

TEST(Config, RejectsUnknownAndMalformed) {
  EXPECT_THROW(params_from_json(nlohmann::json::parse(R"({"lambda_X": 3})")), ConfigError);
  EXPECT_THROW(params_from_json(nlohmann::json::parse(R"({"alpha1": "2.8"})")), ConfigError);
  EXPECT_THROW(params_from_json(nlohmann::json::parse(R"({"N_B": 2.5})")), ConfigError);
  EXPECT_THROW(params_from_json(nlohmann::json::parse("[1, 2]")), ConfigError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), ConfigError);
}

TEST(Config, LoadsFile) {
  const std::string path = testing::TempDir() + "hccn_cfg.json";
  std::ofstream(path) << R"({"lambda_A_per_km2": 400, "P_A_dBm": 0})";
  const NetworkParams p = load_config(path);
  EXPECT_NEAR(p.lambda_ap, 400e-6, 1e-18);
  EXPECT_NEAR(p.power_ap, 1e-3, 1e-18);
}
