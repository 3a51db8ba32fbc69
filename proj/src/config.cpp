#include "bandit/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "bandit/adversarial.hpp"
#include "bandit/contextual.hpp"
#include "bandit/extended.hpp"
#include "bandit/nonstationary.hpp"
#include "bandit/sampling.hpp"
#include "bandit/semiuniform.hpp"
#include "bandit/ucb.hpp"

namespace bandit {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, delim)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == delim) out.push_back("");
  return out;
}

double to_double(const std::string& value, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(where + ": expected a number, got \"" + value + "\"");
  }
}

std::uint64_t to_uint(const std::string& value, const std::string& where) {
  std::uint64_t v = 0;
  auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError(where + ": expected a non-negative integer, got \"" +
                      value + "\"");
  }
  return v;
}

}  // namespace

bool ParsedConfig::has(const std::string& section,
                       const std::string& key) const {
  auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string ParsedConfig::get(const std::string& section,
                              const std::string& key) const {
  auto it = sections.find(section);
  if (it != sections.end()) {
    auto jt = it->second.find(key);
    if (jt != it->second.end()) return jt->second;
  }
  throw ConfigError("missing required key " + section + "." + key);
}

std::string ParsedConfig::getOr(const std::string& section,
                                const std::string& key,
                                const std::string& fallback) const {
  return has(section, key) ? get(section, key) : fallback;
}

double ParsedConfig::getDouble(const std::string& section,
                               const std::string& key) const {
  return to_double(get(section, key), section + "." + key);
}

double ParsedConfig::getDoubleOr(const std::string& section,
                                 const std::string& key,
                                 double fallback) const {
  if (!has(section, key)) return fallback;
  return getDouble(section, key);
}

std::uint64_t ParsedConfig::getUint(const std::string& section,
                                    const std::string& key) const {
  return to_uint(get(section, key), section + "." + key);
}

std::uint64_t ParsedConfig::getUintOr(const std::string& section,
                                      const std::string& key,
                                      std::uint64_t fallback) const {
  if (!has(section, key)) return fallback;
  return getUint(section, key);
}

ParsedConfig parse_config_text(const std::string& text) {
  ParsedConfig out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3) {
        throw ConfigError("line " + std::to_string(lineNo) +
                          ": malformed section header \"" + t + "\"");
      }
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) {
        throw ConfigError("line " + std::to_string(lineNo) +
                          ": empty section name");
      }
      out.sections[section];
      continue;
    }
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineNo) +
                        ": expected key = value, got \"" + t + "\"");
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(lineNo) + ": empty key");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(lineNo) + ": key \"" + key +
                        "\" appears before any [section]");
    }
    out.sections[section][key] = value;
  }
  return out;
}

ParsedConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::vector<double> parse_double_list(const std::string& text,
                                      const std::string& where) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) {
      throw ConfigError(where + ": empty entry in list \"" + text + "\"");
    }
    out.push_back(to_double(item, where));
  }
  if (out.empty()) throw ConfigError(where + ": empty list");
  return out;
}

std::string bound_family_name(BoundSpec::Family family) {
  switch (family) {
    case BoundSpec::Family::Ucb1Gap:
      return "ucb1-gap";
    case BoundSpec::Family::Ucb2Gap:
      return "ucb2-gap";
    case BoundSpec::Family::Minimax:
      return "minimax";
    case BoundSpec::Family::GenericLog:
      return "log";
    case BoundSpec::Family::GenericSqrt:
      return "sqrt";
  }
  return "unknown";
}

std::vector<BoundSpec> parse_bound_list(const std::string& text) {
  std::vector<BoundSpec> out;
  for (const auto& item : split(text, ',')) {
    if (item.empty()) continue;
    std::string name = item;
    double value = std::nan("");
    auto colon = item.find(':');
    if (colon != std::string::npos) {
      name = trim(item.substr(0, colon));
      value = to_double(trim(item.substr(colon + 1)), "bounds.families");
    }
    BoundSpec spec;
    if (name == "ucb1-gap") {
      spec.family = BoundSpec::Family::Ucb1Gap;
    } else if (name == "ucb2-gap") {
      spec.family = BoundSpec::Family::Ucb2Gap;
      if (!std::isnan(value)) spec.alpha = value;
    } else if (name == "minimax") {
      spec.family = BoundSpec::Family::Minimax;
    } else if (name == "log") {
      spec.family = BoundSpec::Family::GenericLog;
      if (std::isnan(value)) {
        throw ConfigError("bounds.families: log needs a coefficient (log:C)");
      }
      spec.c = value;
    } else if (name == "sqrt") {
      spec.family = BoundSpec::Family::GenericSqrt;
      if (std::isnan(value)) {
        throw ConfigError(
            "bounds.families: sqrt needs a coefficient (sqrt:C)");
      }
      spec.c = value;
    } else {
      throw ConfigError("bounds.families: unknown family \"" + name + "\"");
    }
    out.push_back(spec);
  }
  return out;
}

namespace {

void check_allowed_keys(const ParsedConfig& config, const std::string& section,
                        const std::set<std::string>& allowed) {
  auto it = config.sections.find(section);
  if (it == config.sections.end()) return;
  for (const auto& [key, value] : it->second) {
    if (!allowed.count(key)) {
      std::string known;
      for (const auto& k : allowed) {
        if (!known.empty()) known += ", ";
        known += k;
      }
      throw ConfigError("unknown key " + section + "." + key +
                        " (accepted: " + known + ")");
    }
  }
}

std::vector<StochasticArmSpec> bernoulli_arms(const std::vector<double>& ps) {
  std::vector<StochasticArmSpec> arms;
  arms.reserve(ps.size());
  for (double p : ps) arms.push_back(StochasticArmSpec::bernoulli(p));
  return arms;
}

// Fills kind, numArms, envKind and the environment factory for the setup.
void build_environment(const ParsedConfig& config, ExperimentSetup& setup) {
  const std::string kind = config.get("environment", "kind");
  setup.envKind = kind;
  const std::uint64_t horizon = setup.horizon;

  if (kind == "bernoulli") {
    check_allowed_keys(config, "environment", {"kind", "means"});
    auto means = parse_double_list(config.get("environment", "means"),
                                   "environment.means");
    setup.kind = RunKind::Discrete;
    setup.numArms = means.size();
    setup.makeEnv = [means]() {
      return std::make_unique<StochasticEnv>(bernoulli_arms(means));
    };
  } else if (kind == "gaussian") {
    check_allowed_keys(config, "environment",
                       {"kind", "mus", "sigmas", "clamp"});
    auto mus =
        parse_double_list(config.get("environment", "mus"), "environment.mus");
    auto sigmas = parse_double_list(config.get("environment", "sigmas"),
                                    "environment.sigmas");
    if (mus.size() != sigmas.size()) {
      throw ConfigError("environment.mus and environment.sigmas differ in "
                        "length");
    }
    bool clamp = config.has("environment", "clamp");
    double clampLo = 0.0, clampHi = 1.0;
    if (clamp) {
      auto c = parse_double_list(config.get("environment", "clamp"),
                                 "environment.clamp");
      if (c.size() != 2 || c[0] >= c[1]) {
        throw ConfigError("environment.clamp: expected \"lo,hi\" with lo < hi");
      }
      clampLo = c[0];
      clampHi = c[1];
    }
    std::vector<StochasticArmSpec> arms;
    for (std::size_t i = 0; i < mus.size(); ++i) {
      auto spec = StochasticArmSpec::gaussian(mus[i], sigmas[i]);
      if (clamp) spec = spec.withBounds(clampLo, clampHi);
      arms.push_back(spec);
    }
    setup.kind = RunKind::Discrete;
    setup.numArms = arms.size();
    setup.makeEnv = [arms]() { return std::make_unique<StochasticEnv>(arms); };
  } else if (kind == "nonstationary") {
    check_allowed_keys(config, "environment",
                       {"kind", "segments", "means", "slopes", "reward",
                        "sigma"});
    const std::string reward = config.getOr("environment", "reward",
                                            "bernoulli");
    if (reward != "bernoulli" && reward != "gaussian") {
      throw ConfigError("environment.reward: expected bernoulli or gaussian");
    }
    const double sigma = config.getDoubleOr("environment", "sigma", 1.0);
    auto makeArms = [reward, sigma](const std::vector<double>& level) {
      std::vector<StochasticArmSpec> arms;
      for (double v : level) {
        arms.push_back(reward == "bernoulli"
                           ? StochasticArmSpec::bernoulli(v)
                           : StochasticArmSpec::gaussian(v, sigma));
      }
      return arms;
    };
    if (config.has("environment", "segments")) {
      std::vector<NonstationaryEnv::Segment> segments;
      std::size_t arms = 0;
      for (const auto& part :
           split(config.get("environment", "segments"), ';')) {
        if (part.empty()) continue;
        auto colon = part.find(':');
        if (colon == std::string::npos) {
          throw ConfigError("environment.segments: expected start:v1,v2,...");
        }
        NonstationaryEnv::Segment seg;
        seg.start = to_uint(trim(part.substr(0, colon)),
                            "environment.segments start");
        seg.arms = makeArms(parse_double_list(trim(part.substr(colon + 1)),
                                              "environment.segments"));
        if (arms == 0) arms = seg.arms.size();
        if (seg.arms.size() != arms) {
          throw ConfigError(
              "environment.segments: segments disagree on arm count");
        }
        segments.push_back(std::move(seg));
      }
      if (segments.empty()) {
        throw ConfigError("environment.segments: no segments given");
      }
      setup.kind = RunKind::Discrete;
      setup.numArms = arms;
      setup.makeEnv = [segments]() {
        return std::make_unique<NonstationaryEnv>(segments);
      };
    } else {
      auto means = parse_double_list(config.get("environment", "means"),
                                     "environment.means");
      auto slopes = parse_double_list(config.get("environment", "slopes"),
                                      "environment.slopes");
      if (means.size() != slopes.size()) {
        throw ConfigError(
            "environment.means and environment.slopes differ in length");
      }
      auto base = makeArms(means);
      setup.kind = RunKind::Discrete;
      setup.numArms = base.size();
      setup.makeEnv = [base, slopes]() {
        return std::make_unique<NonstationaryEnv>(base, slopes);
      };
    }
  } else if (kind == "adversarial") {
    check_allowed_keys(config, "environment",
                       {"kind", "pattern", "values", "swap_at"});
    const std::string pattern =
        config.getOr("environment", "pattern", "constant");
    auto values = parse_double_list(config.get("environment", "values"),
                                    "environment.values");
    const std::size_t K = values.size();
    std::vector<std::vector<double>> table(horizon,
                                           std::vector<double>(K, 0.0));
    if (pattern == "constant") {
      for (auto& row : table) row = values;
    } else if (pattern == "swap") {
      const std::uint64_t swapAt = config.getUint("environment", "swap_at");
      if (swapAt < 1 || swapAt > horizon) {
        throw ConfigError("environment.swap_at must be in [1, horizon]");
      }
      std::vector<double> swapped(values.rbegin(), values.rend());
      for (std::uint64_t t = 0; t < horizon; ++t) {
        table[t] = (t + 1 < swapAt) ? values : swapped;
      }
    } else {
      throw ConfigError("environment.pattern: expected constant or swap");
    }
    setup.kind = RunKind::Discrete;
    setup.numArms = K;
    setup.makeEnv = [table]() {
      return std::make_unique<AdversarialEnv>(table);
    };
  } else if (kind == "contextual") {
    check_allowed_keys(config, "environment", {"kind", "thetas", "noise"});
    std::vector<std::vector<double>> thetas;
    for (const auto& row : split(config.get("environment", "thetas"), '|')) {
      if (row.empty()) continue;
      thetas.push_back(parse_double_list(row, "environment.thetas"));
      if (thetas.back().size() != thetas.front().size()) {
        throw ConfigError("environment.thetas: rows disagree on dimension");
      }
    }
    if (thetas.empty()) throw ConfigError("environment.thetas: empty");
    const double noise = config.getDoubleOr("environment", "noise", 0.1);
    setup.kind = RunKind::Contextual;
    setup.numArms = thetas.size();
    setup.makeContextEnv = [thetas, noise]() {
      return std::make_unique<ContextualLinearEnv>(thetas, noise);
    };
  } else if (kind == "continuum") {
    check_allowed_keys(config, "environment",
                       {"kind", "fn", "peak", "top", "noise", "sigma",
                        "curvature"});
    const std::string fn = config.getOr("environment", "fn", "triangle");
    ContinuumEnv::MeanFn meanFn;
    if (fn == "triangle") {
      meanFn = ContinuumEnv::MeanFn::Triangle;
    } else if (fn == "parabola") {
      meanFn = ContinuumEnv::MeanFn::Parabola;
    } else {
      throw ConfigError("environment.fn: expected triangle or parabola");
    }
    const double peak = config.getDouble("environment", "peak");
    const double top = config.getDouble("environment", "top");
    const std::string noise = config.getOr("environment", "noise",
                                           "bernoulli");
    ContinuumEnv::Noise noiseKind;
    if (noise == "bernoulli") {
      noiseKind = ContinuumEnv::Noise::Bernoulli;
    } else if (noise == "gaussian") {
      noiseKind = ContinuumEnv::Noise::Gaussian;
    } else {
      throw ConfigError("environment.noise: expected bernoulli or gaussian");
    }
    const double sigma = config.getDoubleOr("environment", "sigma", 0.0);
    const double curvature = config.getDoubleOr("environment", "curvature",
                                                1.0);
    setup.kind = RunKind::Continuum;
    setup.numArms = 0;
    setup.makeContinuumEnv = [=]() {
      return std::make_unique<ContinuumEnv>(meanFn, peak, top, noiseKind,
                                            sigma, curvature);
    };
  } else {
    throw ConfigError("environment.kind: unknown kind \"" + kind +
                      "\" (accepted: bernoulli, gaussian, nonstationary, "
                      "adversarial, contextual, continuum)");
  }
}

struct EnvTraits {
  bool haveBounds = false;
  double lo = 0.0;
  double hi = 1.0;
  bool adversarial = false;
};

EnvTraits probe_environment(const ExperimentSetup& setup) {
  EnvTraits traits;
  if (setup.kind != RunKind::Discrete) return traits;
  auto env = setup.makeEnv();
  traits.haveBounds = env->rewardBounds(traits.lo, traits.hi);
  traits.adversarial = dynamic_cast<AdversarialEnv*>(env.get()) != nullptr;
  return traits;
}

PosteriorBank::Model parse_model(const ParsedConfig& config) {
  const std::string model = config.getOr("policy", "model", "bernoulli");
  if (model == "bernoulli") return PosteriorBank::Model::Bernoulli;
  if (model == "gaussian") return PosteriorBank::Model::Gaussian;
  throw ConfigError("policy.model: expected bernoulli or gaussian");
}

// Fills makePolicy / makeContextPolicy / makeContinuumPolicy and
// playsPerStep. Throws ConfigError for unknown names, bad pairings, and
// invalid parameters.
void build_policy(const ParsedConfig& config, ExperimentSetup& setup,
                  const EnvTraits& traits) {
  const std::string name = config.get("policy", "name");
  setup.policyName = name;
  const std::size_t K = setup.numArms;
  const std::uint64_t H = setup.horizon;

  std::set<std::string> allowed = {"name", "epoch_length"};
  auto requireDiscrete = [&]() {
    if (setup.kind != RunKind::Discrete) {
      throw ConfigError("policy \"" + name +
                        "\" plays discrete arms but environment kind \"" +
                        setup.envKind + "\" is not a discrete-armed process");
    }
  };
  auto requireBounds = [&]() {
    requireDiscrete();
    if (!traits.haveBounds) {
      throw ConfigError("policy \"" + name +
                        "\" rescales rewards into [0,1] and needs an "
                        "environment with bounded rewards, but kind \"" +
                        setup.envKind + "\" does not guarantee bounds");
    }
  };

  const double lo = traits.lo, hi = traits.hi;
  std::function<std::unique_ptr<Policy>()> base;

  if (name == "random") {
    requireDiscrete();
    base = [K]() {
      return std::make_unique<EpsilonGreedyPolicy>(
          K, EpsilonSchedule::constant(1.0));
    };
  } else if (name == "epsilon-greedy") {
    requireDiscrete();
    allowed.insert("epsilon");
    const double eps = config.getDoubleOr("policy", "epsilon", 0.1);
    base = [K, eps]() {
      return std::make_unique<EpsilonGreedyPolicy>(
          K, EpsilonSchedule::constant(eps));
    };
  } else if (name == "epsilon-decreasing") {
    requireDiscrete();
    allowed.insert("epsilon0");
    const double eps0 = config.getDoubleOr("policy", "epsilon0", 1.0);
    base = [K, eps0]() {
      return std::make_unique<EpsilonGreedyPolicy>(
          K, EpsilonSchedule::vermorel(eps0));
    };
  } else if (name == "greedy-mix") {
    requireDiscrete();
    allowed.insert("d");
    const double d = config.getDoubleOr("policy", "d", 0.5);
    base = [K, d]() {
      return std::make_unique<EpsilonGreedyPolicy>(
          K, EpsilonSchedule::greedyMix(d, K));
    };
  } else if (name == "epsilon-n") {
    requireDiscrete();
    allowed.insert("c");
    allowed.insert("d");
    const double c = config.getDoubleOr("policy", "c", 5.0);
    const double d = config.getDoubleOr("policy", "d", 0.1);
    base = [K, c, d]() {
      return std::make_unique<EpsilonGreedyPolicy>(
          K, EpsilonSchedule::epsilonN(c, d, K));
    };
  } else if (name == "epsilon-first") {
    requireDiscrete();
    allowed.insert("epsilon0");
    const double eps0 = config.getDoubleOr("policy", "epsilon0", 0.1);
    base = [K, eps0, H]() {
      return std::make_unique<EpsilonFirstPolicy>(K, eps0, H);
    };
  } else if (name == "ucb1") {
    requireDiscrete();
    base = [K]() { return std::make_unique<Ucb1Policy>(K); };
  } else if (name == "ucb2") {
    requireDiscrete();
    allowed.insert("alpha");
    const double alpha = config.getDoubleOr("policy", "alpha", 0.5);
    base = [K, alpha]() { return std::make_unique<Ucb2Policy>(K, alpha); };
  } else if (name == "ucb-tuned") {
    requireDiscrete();
    base = [K]() { return std::make_unique<UcbTunedPolicy>(K); };
  } else if (name == "moss") {
    requireDiscrete();
    base = [K, H]() { return std::make_unique<MossPolicy>(K, H); };
  } else if (name == "kl-ucb") {
    requireDiscrete();
    allowed.insert("c");
    const double c = config.getDoubleOr("policy", "c", 0.0);
    base = [K, c]() { return std::make_unique<KlUcbPolicy>(K, c); };
  } else if (name == "bayes-ucb") {
    requireDiscrete();
    for (const char* k : {"model", "prior_a", "prior_b", "prior_mean",
                          "prior_var", "obs_var"}) {
      allowed.insert(k);
    }
    const std::string model = config.getOr("policy", "model", "bernoulli");
    BayesUcbPolicy::Model m;
    if (model == "bernoulli") {
      m = BayesUcbPolicy::Model::Bernoulli;
    } else if (model == "gaussian") {
      m = BayesUcbPolicy::Model::Gaussian;
    } else {
      throw ConfigError("policy.model: expected bernoulli or gaussian");
    }
    const double a = config.getDoubleOr("policy", "prior_a", 1.0);
    const double b = config.getDoubleOr("policy", "prior_b", 1.0);
    const double pm = config.getDoubleOr("policy", "prior_mean", 0.0);
    const double pv = config.getDoubleOr("policy", "prior_var", 1.0);
    const double ov = config.getDoubleOr("policy", "obs_var", 1.0);
    base = [=]() {
      return std::make_unique<BayesUcbPolicy>(K, m, a, b, pm, pv, ov);
    };
  } else if (name == "thompson" || name == "optimistic-thompson") {
    requireDiscrete();
    for (const char* k :
         {"model", "prior_a", "prior_b", "prior_mean", "prior_var"}) {
      allowed.insert(k);
    }
    const PosteriorBank::Model m = parse_model(config);
    const bool optimistic = (name == "optimistic-thompson");
    const double a = config.getDoubleOr("policy", "prior_a", 1.0);
    const double b = config.getDoubleOr("policy", "prior_b", 1.0);
    const double pm = config.getDoubleOr("policy", "prior_mean", 0.0);
    const double pv = config.getDoubleOr("policy", "prior_var", 1.0);
    base = [=]() {
      return std::make_unique<ThompsonPolicy>(K, m, optimistic, a, b, pm, pv);
    };
  } else if (name == "poker") {
    requireDiscrete();
    base = [K, H]() { return std::make_unique<PokerPolicy>(K, H); };
  } else if (name == "besa") {
    requireDiscrete();
    base = [K]() { return std::make_unique<BesaPolicy>(K); };
  } else if (name == "exp3") {
    requireBounds();
    allowed.insert("gamma");
    const double gamma = config.getDoubleOr("policy", "gamma", 0.1);
    base = [=]() { return std::make_unique<Exp3Policy>(K, gamma, lo, hi); };
  } else if (name == "exp4" || name == "exp4p") {
    requireBounds();
    for (const char* k : {"gamma", "advice", "num_experts", "delta"}) {
      allowed.insert(k);
    }
    const double gamma = config.getDoubleOr("policy", "gamma", 0.1);
    const std::string advice = config.getOr("policy", "advice", "uniform");
    const std::size_t numExperts = static_cast<std::size_t>(
        config.getUintOr("policy", "num_experts", K));
    AdviceMatrix matrix;
    if (advice == "uniform") {
      matrix = make_uniform_advice(numExperts, K);
    } else if (advice == "point") {
      matrix = make_point_mass_advice(numExperts, K);
    } else {
      throw ConfigError("policy.advice: expected uniform or point");
    }
    const auto variant = (name == "exp4p")
                             ? Exp4Policy::Variant::HighProbability
                             : Exp4Policy::Variant::Plain;
    const double delta = config.getDoubleOr("policy", "delta", 0.05);
    base = [=]() {
      AdviceFn fn = [matrix](std::uint64_t) { return matrix; };
      return std::make_unique<Exp4Policy>(K, numExperts, gamma, fn, variant,
                                          delta, H, lo, hi);
    };
  } else if (name == "sao") {
    requireBounds();
    if (K != 2) {
      throw ConfigError("policy \"sao\" needs exactly 2 arms, environment "
                        "has " +
                        std::to_string(K));
    }
    allowed.insert("c0");
    allowed.insert("gamma");
    const double c0 =
        config.getDoubleOr("policy", "c0", SaoPolicy::defaultC(H));
    const double gamma = config.getDoubleOr("policy", "gamma", 0.1);
    base = [=]() {
      return std::make_unique<SaoPolicy>(H, c0, gamma, lo, hi);
    };
  } else if (name == "ducb") {
    requireDiscrete();
    for (const char* k : {"gamma", "b", "xi"}) allowed.insert(k);
    const double gamma = config.getDoubleOr("policy", "gamma", 0.95);
    const double b = config.getDoubleOr("policy", "b",
                                        traits.haveBounds ? hi - lo : 1.0);
    const double xi = config.getDoubleOr("policy", "xi", 0.5);
    base = [=]() {
      return std::make_unique<DiscountedUcbPolicy>(K, gamma, b, xi);
    };
  } else if (name == "swucb") {
    requireDiscrete();
    for (const char* k : {"tau", "b", "xi"}) allowed.insert(k);
    const std::size_t tau =
        static_cast<std::size_t>(config.getUintOr("policy", "tau", 1000));
    const double b = config.getDoubleOr("policy", "b",
                                        traits.haveBounds ? hi - lo : 1.0);
    const double xi = config.getDoubleOr("policy", "xi", 0.5);
    base = [=]() {
      return std::make_unique<SlidingWindowUcbPolicy>(K, tau, b, xi);
    };
  } else if (name == "adapt-eve") {
    requireDiscrete();
    for (const char* k : {"ph_delta", "ph_lambda", "meta_period", "inner"}) {
      allowed.insert(k);
    }
    const double phDelta = config.getDoubleOr("policy", "ph_delta", 0.005);
    const double phLambda = config.getDoubleOr("policy", "ph_lambda", 50.0);
    const std::uint64_t metaPeriod =
        config.getUintOr("policy", "meta_period", 200);
    const std::string inner = config.getOr("policy", "inner", "ucb-tuned");
    AdaptEvePolicy::InnerFactory factory;
    if (inner == "ucb-tuned") {
      factory = nullptr;
    } else if (inner == "ucb1") {
      factory = [](std::size_t arms) -> std::unique_ptr<Policy> {
        return std::make_unique<Ucb1Policy>(arms);
      };
    } else {
      throw ConfigError("policy.inner: expected ucb-tuned or ucb1");
    }
    base = [=]() {
      return std::make_unique<AdaptEvePolicy>(K, phDelta, phLambda, metaPeriod,
                                              factory);
    };
  } else if (name == "exp3r") {
    requireBounds();
    for (const char* k : {"gamma", "interval", "drift"}) allowed.insert(k);
    const double gamma = config.getDoubleOr("policy", "gamma", 0.1);
    const std::uint64_t interval = config.getUintOr("policy", "interval", 100);
    const double drift = config.getDoubleOr("policy", "drift", 0.05);
    base = [=]() {
      return std::make_unique<Exp3RPolicy>(K, gamma, interval, drift, lo, hi);
    };
  } else if (name == "kalman") {
    requireBounds();
    for (const char* k : {"obs_var", "tr_var", "mode"}) allowed.insert(k);
    const double obsVar = config.getDouble("policy", "obs_var");
    const double trVar = config.getDouble("policy", "tr_var");
    const std::string mode = config.getOr("policy", "mode", "ts");
    KalmanPolicy::Mode m;
    if (mode == "ts") {
      m = KalmanPolicy::Mode::ThompsonDraw;
    } else if (mode == "ucb") {
      m = KalmanPolicy::Mode::UpperConfidence;
    } else {
      throw ConfigError("policy.mode: expected ts or ucb");
    }
    base = [=]() {
      return std::make_unique<KalmanPolicy>(K, obsVar, trVar, lo, hi, m);
    };
  } else if (name == "mp-ts" || name == "imp-ts") {
    requireDiscrete();
    for (const char* k :
         {"m", "model", "prior_a", "prior_b", "prior_mean", "prior_var"}) {
      allowed.insert(k);
    }
    const std::size_t m =
        static_cast<std::size_t>(config.getUintOr("policy", "m", 1));
    if (m < 1 || m > K) {
      throw ConfigError("policy.m: need 1 <= m <= number of arms (" +
                        std::to_string(K) + "), got " + std::to_string(m));
    }
    const PosteriorBank::Model model = parse_model(config);
    const double a = config.getDoubleOr("policy", "prior_a", 1.0);
    const double b = config.getDoubleOr("policy", "prior_b", 1.0);
    const double pm = config.getDoubleOr("policy", "prior_mean", 0.0);
    const double pv = config.getDoubleOr("policy", "prior_var", 1.0);
    setup.playsPerStep = m;
    if (name == "mp-ts") {
      base = [=]() {
        return std::make_unique<MpTsPolicy>(K, m, model, a, b, pm, pv);
      };
    } else {
      base = [=]() {
        return std::make_unique<ImpTsPolicy>(K, m, model, a, b, pm, pv);
      };
    }
  } else if (name == "linucb" || name == "lints" || name == "decayed-lints") {
    if (setup.kind != RunKind::Contextual) {
      throw ConfigError("policy \"" + name +
                        "\" needs a contextual environment, but kind \"" +
                        setup.envKind + "\" is not contextual");
    }
    auto env = setup.makeContextEnv();
    const std::size_t d = setup.numArms * (1 + env->contextDim());
    const double lambda = config.getDoubleOr("policy", "lambda", 1.0);
    allowed.insert("lambda");
    if (name == "linucb") {
      allowed.insert("alpha");
      const double alpha = config.getDoubleOr("policy", "alpha", 1.0);
      setup.makeContextPolicy = [d, alpha, lambda]() {
        return std::make_unique<LinUcbPolicy>(d, alpha, lambda);
      };
    } else if (name == "lints") {
      setup.makeContextPolicy = [d, lambda]() {
        return std::make_unique<LinTsPolicy>(d, lambda);
      };
    } else {
      allowed.insert("decay");
      allowed.insert("c");
      const std::string decay = config.get("policy", "decay");
      DecayKind kind;
      if (decay == "linear") {
        kind = DecayKind::Linear;
      } else if (decay == "exponential") {
        kind = DecayKind::Exponential;
      } else {
        throw ConfigError("policy.decay: expected linear or exponential");
      }
      const double c = config.getDouble("policy", "c");
      setup.makeContextPolicy = [d, kind, c, lambda]() {
        return std::make_unique<DecayedLinTsPolicy>(d, kind, c, lambda);
      };
    }
  } else if (name == "hoo") {
    if (setup.kind != RunKind::Continuum) {
      throw ConfigError("policy \"hoo\" plays points in [0,1] and needs a "
                        "continuum environment, but kind \"" +
                        setup.envKind + "\" has discrete arms");
    }
    for (const char* k : {"rho", "v1", "max_depth"}) allowed.insert(k);
    const double rho = config.getDoubleOr("policy", "rho", 0.5);
    const double v1 = config.getDoubleOr("policy", "v1", 1.0);
    const std::uint32_t maxDepth =
        static_cast<std::uint32_t>(config.getUintOr("policy", "max_depth", 40));
    setup.makeContinuumPolicy = [rho, v1, maxDepth]() {
      return std::make_unique<HooPolicy>(rho, v1, maxDepth);
    };
  } else {
    std::string names;
    for (const auto& info : policy_registry()) {
      if (!names.empty()) names += ", ";
      names += info.name;
    }
    throw ConfigError("policy.name: unknown policy \"" + name +
                      "\" (accepted: " + names + ")");
  }

  check_allowed_keys(config, "policy", allowed);

  if (base) {
    if (config.has("policy", "epoch_length")) {
      const std::uint64_t epochLength =
          config.getUint("policy", "epoch_length");
      setup.makePolicy = [base, epochLength]() {
        return std::make_unique<EpochWrapPolicy>(base, epochLength);
      };
    } else {
      setup.makePolicy = base;
    }
  } else if (config.has("policy", "epoch_length")) {
    throw ConfigError(
        "policy.epoch_length only applies to discrete-armed policies");
  }
}

MetricSelection build_metrics(const ParsedConfig& config,
                              const ExperimentSetup& setup,
                              const EnvTraits& traits) {
  MetricSelection sel;
  std::string fallback;
  switch (setup.kind) {
    case RunKind::Discrete:
      fallback = traits.adversarial ? "ee,ep,subopt,weak" : "ee,ep,subopt";
      break;
    case RunKind::Contextual:
      fallback = "ee,ep";
      break;
    case RunKind::Continuum:
      fallback = "ee";
      break;
  }
  const std::string metrics = config.getOr("experiment", "metrics", fallback);
  for (const auto& item : split(metrics, ',')) {
    if (item.empty()) continue;
    if (item == "ee") {
      sel.ee = true;
    } else if (item == "ep") {
      sel.ep = true;
    } else if (item == "subopt") {
      sel.subopt = true;
    } else if (item == "stat") {
      sel.stat = true;
    } else if (item == "weak") {
      sel.weak = true;
    } else {
      throw ConfigError("experiment.metrics: unknown metric \"" + item +
                        "\" (accepted: ee, ep, subopt, stat, weak)");
    }
  }
  if (setup.kind != RunKind::Discrete && (sel.subopt || sel.stat || sel.weak)) {
    throw ConfigError(
        "experiment.metrics: subopt, stat and weak need a discrete-armed "
        "environment");
  }
  if (setup.kind == RunKind::Continuum && sel.ep) {
    throw ConfigError(
        "experiment.metrics: ep is not defined for continuum environments");
  }
  if (sel.weak && !traits.adversarial) {
    throw ConfigError(
        "experiment.metrics: weak compares against a fixed reward table and "
        "needs an adversarial environment");
  }
  sel.statConfidence = config.getDoubleOr("experiment", "stat_confidence", 0.9);
  if (sel.statConfidence <= 0.0 || sel.statConfidence >= 1.0) {
    throw ConfigError("experiment.stat_confidence must be in (0,1)");
  }
  const std::string method =
      config.getOr("experiment", "stat_method", "parametric");
  if (method == "parametric") {
    sel.statMethod = StatMethod::Parametric;
  } else if (method == "bootstrap") {
    sel.statMethod = StatMethod::Bootstrap;
  } else {
    throw ConfigError(
        "experiment.stat_method: expected parametric or bootstrap");
  }
  sel.bootstrapSamples = static_cast<std::size_t>(
      config.getUintOr("experiment", "bootstrap_samples", 1000));
  if (sel.stat && sel.statMethod == StatMethod::Bootstrap &&
      sel.bootstrapSamples < 1) {
    throw ConfigError("experiment.bootstrap_samples must be >= 1");
  }
  return sel;
}

}  // namespace

ExperimentSetup build_experiment(const ParsedConfig& config) {
  ExperimentSetup setup;
  setup.raw = config;

  check_allowed_keys(config, "experiment",
                     {"horizon", "replications", "seed", "output", "metrics",
                      "stat_confidence", "stat_method", "bootstrap_samples"});
  check_allowed_keys(config, "bounds", {"families"});

  setup.horizon = config.getUint("experiment", "horizon");
  if (setup.horizon < 1) throw ConfigError("experiment.horizon must be >= 1");
  setup.replications = config.getUint("experiment", "replications");
  if (setup.replications < 1) {
    throw ConfigError("experiment.replications must be >= 1");
  }
  setup.seed = config.getUintOr("experiment", "seed", 1);
  setup.outputDir = config.getOr("experiment", "output", "results");

  build_environment(config, setup);
  const EnvTraits traits = probe_environment(setup);
  build_policy(config, setup, traits);
  setup.metrics = build_metrics(config, setup, traits);

  if (config.has("bounds", "families")) {
    setup.bounds = parse_bound_list(config.get("bounds", "families"));
    if (!setup.bounds.empty() && setup.kind != RunKind::Discrete) {
      throw ConfigError(
          "bounds.families: bound comparisons need a discrete-armed "
          "environment");
    }
  }

  // Flush constructor-level validation now instead of mid-run.
  try {
    if (setup.makePolicy) {
      auto p = setup.makePolicy();
      if (p->numArms() != setup.numArms) {
        throw ConfigError("policy arm count disagrees with environment");
      }
    }
    if (setup.makeContextPolicy) setup.makeContextPolicy();
    if (setup.makeContinuumPolicy) setup.makeContinuumPolicy();
    if (setup.makeEnv) setup.makeEnv();
    if (setup.makeContextEnv) setup.makeContextEnv();
    if (setup.makeContinuumEnv) setup.makeContinuumEnv();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError("invalid parameters for policy \"" + setup.policyName +
                      "\" / environment \"" + setup.envKind + "\": " +
                      e.what());
  }

  return setup;
}

const std::vector<PolicyInfo>& policy_registry() {
  static const std::vector<PolicyInfo> registry = {
      {"random", "discrete", "-", "uniform random arm each step"},
      {"epsilon-greedy", "discrete", "epsilon",
       "fixed exploration rate, otherwise best empirical mean"},
      {"epsilon-decreasing", "discrete", "epsilon0",
       "exploration rate epsilon0/t"},
      {"greedy-mix", "discrete", "d", "exploration rate ~ log(t)/t"},
      {"epsilon-n", "discrete", "c, d",
       "exploration rate min(1, cK/(d^2 n))"},
      {"epsilon-first", "discrete", "epsilon0",
       "pure exploration for ceil(epsilon0*H) steps, then frozen greedy"},
      {"ucb1", "discrete", "-", "mean + sqrt(2 ln t / n) index"},
      {"ucb2", "discrete", "alpha", "epoch-based index policy"},
      {"ucb-tuned", "discrete", "-", "variance-aware index"},
      {"moss", "discrete", "-", "horizon-aware minimax index"},
      {"kl-ucb", "discrete", "c",
       "Bernoulli KL upper confidence via bisection"},
      {"bayes-ucb", "discrete",
       "model, prior_a, prior_b, prior_mean, prior_var, obs_var",
       "posterior quantile index, level 1 - 1/t"},
      {"thompson", "discrete",
       "model, prior_a, prior_b, prior_mean, prior_var",
       "posterior-draw argmax"},
      {"optimistic-thompson", "discrete",
       "model, prior_a, prior_b, prior_mean, prior_var",
       "posterior draw floored at the posterior mean"},
      {"poker", "discrete", "-",
       "price-of-knowledge value-of-information score"},
      {"besa", "discrete", "-", "subsampled mean duels in a random bracket"},
      {"exp3", "discrete", "gamma", "exponential weights with mixing"},
      {"exp4", "discrete", "gamma, advice, num_experts",
       "exponential weights over expert advice"},
      {"exp4p", "discrete", "gamma, advice, num_experts, delta",
       "advice weights with a variance bonus"},
      {"sao", "discrete", "c0, gamma",
       "two-arm stochastic play with adversarial fallback"},
      {"ducb", "discrete", "gamma, b, xi", "discounted means and counts"},
      {"swucb", "discrete", "tau, b, xi", "sliding-window means"},
      {"adapt-eve", "discrete", "ph_delta, ph_lambda, meta_period, inner",
       "change detection plus incumbent/challenger meta phase"},
      {"exp3r", "discrete", "gamma, interval, drift",
       "exponential weights with drift-triggered resets"},
      {"kalman", "discrete", "obs_var, tr_var, mode",
       "per-arm Kalman filter posteriors"},
      {"mp-ts", "discrete", "m, model, prior_a, prior_b",
       "m posterior draws per step (multiple plays)"},
      {"imp-ts", "discrete", "m, model, prior_a, prior_b",
       "m-1 empirical slots plus one posterior draw"},
      {"linucb", "contextual", "alpha, lambda",
       "ridge point estimate plus confidence width"},
      {"lints", "contextual", "lambda", "ridge posterior sampling"},
      {"decayed-lints", "contextual", "decay, c, lambda",
       "weighted least squares with age-decayed weights"},
      {"hoo", "continuum", "rho, v1, max_depth",
       "hierarchical cover tree over [0,1]"},
  };
  return registry;
}

}  // namespace bandit
