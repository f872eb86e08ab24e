#include <gtest/gtest.h>

#include "spherefv/config.hpp"
#include "spherefv/errors.hpp"

using namespace spherefv;

TEST(Config, EmptyTextGivesDefaults) {
  const RunConfig c = parse_config("");
  EXPECT_EQ(c.mesh.n_bands, 16);
  EXPECT_EQ(c.flux.kind, "linear");
  EXPECT_EQ(c.scheme.order, 1);
  EXPECT_EQ(c.converge_resolutions.size(), 4u);
}

TEST(Config, ParsesKeysAndComments) {
  const RunConfig c = parse_config(
      "# comment line\n"
      "mesh.n_bands = 8   # trailing comment\n"
      "mesh.n_lon_equator=16\n"
      "flux.kind = burgers\n"
      "flux.axis = 0 1 1\n"
      "init.kind = band_step\n"
      "init.lat_min = -0.25\n"
      "scheme.numerical_flux = lax_friedrichs\n"
      "scheme.order = 2\n"
      "scheme.cfl = 0.3\n"
      "time.t_end = 0.125\n"
      "output.prefix = a_\n"
      "converge.resolutions = 8x16, 16x32\n"
      "torus.resolutions = 32,64\n");
  EXPECT_EQ(c.mesh.n_bands, 8);
  EXPECT_EQ(c.flux.kind, "burgers");
  EXPECT_TRUE(c.flux.axis_given);
  EXPECT_EQ(c.flux.axis, Vec3d(0, 1, 1));
  EXPECT_EQ(c.init.lat_min, -0.25);
  EXPECT_EQ(c.scheme.numerical_flux, NumericalFluxKind::lax_friedrichs);
  EXPECT_EQ(c.scheme.order, 2);
  EXPECT_EQ(c.time.t_end, 0.125);
  EXPECT_EQ(c.output.prefix, "a_");
  ASSERT_EQ(c.converge_resolutions.size(), 2u);
  EXPECT_EQ(c.converge_resolutions[1].n_lon_equator, 32);
  EXPECT_EQ(c.torus.resolutions, (std::vector<int>{32, 64}));
}

TEST(Config, RejectsBadInput) {
  const char* bad[] = {
      "mesh.n_band = 8\n",                          // unknown key
      "mesh.n_bands = 8\nmesh.n_bands = 8\n",       // duplicate
      "mesh.n_bands = 7\n",                         // odd
      "mesh.n_bands = eight\n",                     // not a number
      "mesh.n_lon_equator = 10\n",                  // not divisible after merging
      "mesh.merge_threshold = 1.5\n",               // out of range
      "flux.kind = cubic\n",                        // unknown kind
      "flux.kind = custom-axis\n",                  // needs an axis
      "flux.axis = 0 0\n",                          // two components
      "flux.axis = 0 0 0\n",                        // zero
      "init.kind = constant\ninit.kappa = 2\n",     // parameter of another kind
      "init.kind = band_step\ninit.lat_min = 1\ninit.lat_max = 0\n",
      "scheme.order = 2\nscheme.cfl = 0.8\n",       // MUSCL needs cfl <= 0.5
      "scheme.cfl = nan\n",
      "scheme.limiter = superbee\n",
      "time.t_end = -1\n",
      "time.n_outputs = 0\n",
      "output.prefix = a/b\n",
      "torus.resolutions = 64,32\n",
      "torus.t_end = 0\n",
      "converge.resolutions = 8by16\n",
      "just some words\n",
  };
  for (const char* text : bad) EXPECT_THROW(parse_config(text), ConfigError) << text;
}

TEST(Config, EchoRoundTrip) {
  const RunConfig c = parse_config(
      "flux.kind = trig\nflux.axis = 0.1 0.2 0.3\ninit.kind = two_bumps\ninit.kappa = 3.3\n"
      "scheme.cfl = 0.1\ntime.t_end = 0.30000000000000004\n");
  const std::string echo = echo_config(c);
  const RunConfig again = parse_config(echo);
  EXPECT_EQ(echo_config(again), echo);
  EXPECT_EQ(again.time.t_end, 0.30000000000000004);
  EXPECT_EQ(again.flux.axis, c.flux.axis);
  EXPECT_NE(echo.find("init.center2_lon"), std::string::npos);
  EXPECT_EQ(echo.find("init.lat_min"), std::string::npos);
}

TEST(Config, Lists) {
  EXPECT_EQ(parse_int_list("1, 2,3"), (std::vector<int>{1, 2, 3}));
  EXPECT_THROW(parse_int_list("1,,2"), ConfigError);
  const auto r = parse_resolutions("4x8,64x128");
  EXPECT_EQ(r[1].n_bands, 64);
  EXPECT_THROW(parse_resolutions("2x8"), ConfigError);
}

TEST(Config, MissingFile) { EXPECT_THROW(load_config("/nonexistent/dir/config.txt"), ConfigError); }
