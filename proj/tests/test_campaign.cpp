#include "lstft/campaign.hpp"
#include "lstft/io.hpp"

#include <doctest.h>

using namespace lstft;

TEST_CASE("every checker runs and replays from its witness") {
  CampaignConfig c;
  c.half_width = 2;
  c.window_half_width = 1;
  for (int n : {1, 2}) {
    c.dimension = n;
    for (const auto& name : checker_names()) {
      CAPTURE(name);
      CAPTURE(n);
      for (int t = 0; t < 3; ++t) {
        const InequalityReport r = run_trial(name, c, trial_seed(7, name, t));
        CHECK(r.status != Status::Fail);
        const InequalityReport again = replay(io::report_from_json(io::json::parse(io::to_json(r).dump())));
        CHECK(again.slack == r.slack);
        CHECK(again.status == r.status);
      }
    }
  }
}

TEST_CASE("campaign output does not depend on the job count") {
  CampaignConfig c;
  c.checks = {"plancherel", "support_bound", "entropy"};
  c.trials = 12;
  c.seed = 99;
  const auto one = run_campaign(c);
  c.jobs = 3;
  const auto three = run_campaign(c);
  io::json a = io::json::array(), b = io::json::array();
  for (const auto& r : one.reports) a.push_back(io::to_json(r, false));
  for (const auto& r : three.reports) b.push_back(io::to_json(r, false));
  CHECK(a.dump() == b.dump());
  CHECK(!one.failed());
}

TEST_CASE("delta fixtures are tight for entropy") {
  CampaignConfig c;
  c.checks = {"entropy", "small_set", "support_bound", "joint_concentration"};
  c.signal = c.window = "delta";
  c.sigma = "fiber(0.25)";
  c.trials = 2;
  const auto res = run_campaign(c);
  for (const auto& r : res.reports) {
    CAPTURE(r.name);
    CHECK(std::abs(r.slack) < 1e-9);
  }
}

TEST_CASE("an injected fault fails and replays") {
  CampaignConfig c;
  c.checks = {"plancherel"};
  c.trials = 3;
  c.fault = 1.001;
  const auto res = run_campaign(c);
  CHECK(res.failed());
  CHECK(res.summaries[0].failures == 3);
  const auto again = replay(io::report_from_json(io::json::parse(io::to_json(res.reports[0]).dump())));
  CHECK(again.failed());
  CHECK(again.slack == res.reports[0].slack);
}

TEST_CASE("bad configs are rejected") {
  CampaignConfig c;
  c.checks = {"plancherel", "nonsense"};
  CHECK_THROWS_WITH_AS(validate(c), doctest::Contains("unknown checker 'nonsense'; valid: plancherel, orthogonality"),
                       InputError);
  c.checks = {"entropy"};
  c.fault = 2;
  CHECK_THROWS_AS(validate(c), InputError);
  CHECK_THROWS_AS(parse_signal_spec("gaussian_sampled(-1)"), InputError);
  CHECK_THROWS_AS(parse_sigma_spec("ball(1)"), InputError);
  CHECK(parse_sigma_spec("ball(1.5, 32)").kind == SigmaSpec::Kind::Ball);
  CHECK(parse_signal_spec("gaussian_sampled(1.5)").param == 1.5);
}
