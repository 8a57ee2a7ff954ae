#include <cmath>
#include <string>

#include "renyiq/density.hpp"
#include "renyiq/errors.hpp"

namespace renyiq {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

double number(const json& spec, const std::string& key, const std::string& path,
              std::optional<double> fallback = std::nullopt) {
  const auto it = spec.find(key);
  if (it == spec.end()) {
    if (fallback) return *fallback;
    fail(path + "." + key, "missing required field");
  }
  if (it->is_number()) return it->get<double>();
  if (it->is_null()) return key == "lo" ? -kInf : kInf;
  if (it->is_string()) {
    const auto s = it->get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
    if (s == "-inf" || s == "-infinity") return -kInf;
  }
  fail(path + "." + key, "expected a number");
}

Density parse(const json& spec, const std::string& path) {
  if (!spec.is_object()) fail(path, "expected an object");
  const auto fam = spec.find("family");
  if (fam == spec.end() || !fam->is_string()) {
    fail(path + ".family", "missing or not a string");
  }
  const std::string family = fam->get<std::string>();
  try {
    if (family == "uniform") {
      return uniform(number(spec, "a", path), number(spec, "b", path));
    }
    if (family == "gaussian" || family == "normal") {
      return gaussian(number(spec, "mean", path, 0.0),
                      number(spec, "sigma", path));
    }
    if (family == "laplacian" || family == "laplace") {
      return laplacian(number(spec, "mean", path, 0.0),
                       number(spec, "scale", path));
    }
    if (family == "exponential") {
      return exponential(number(spec, "rate", path),
                         number(spec, "shift", path, 0.0));
    }
    if (family == "piecewise_linear") {
      const auto it = spec.find("knots");
      if (it == spec.end() || !it->is_array()) {
        fail(path + ".knots", "expected an array of [x, y] pairs");
      }
      std::vector<std::pair<double, double>> knots;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const json& k = (*it)[i];
        if (!k.is_array() || k.size() != 2 || !k[0].is_number() ||
            !k[1].is_number()) {
          fail(path + ".knots[" + std::to_string(i) + "]",
               "expected [x, y] numbers");
        }
        knots.emplace_back(k[0].get<double>(), k[1].get<double>());
      }
      return piecewise_linear(std::move(knots));
    }
    if (family == "mixture") {
      const auto it = spec.find("components");
      if (it == spec.end() || !it->is_array()) {
        fail(path + ".components", "expected an array");
      }
      std::vector<std::pair<double, Density>> comps;
      for (std::size_t i = 0; i < it->size(); ++i) {
        const std::string sub = path + ".components[" + std::to_string(i) + "]";
        const json& c = (*it)[i];
        if (!c.is_object() || !c.contains("density")) {
          fail(sub, "expected {\"weight\": w, \"density\": {...}}");
        }
        comps.emplace_back(number(c, "weight", sub, 1.0),
                           parse(c["density"], sub + ".density"));
      }
      return mixture(std::move(comps));
    }
    if (family == "restricted") {
      if (!spec.contains("base")) fail(path + ".base", "missing required field");
      const Density base = parse(spec["base"], path + ".base");
      return restrict(base, {number(spec, "lo", path, -kInf),
                             number(spec, "hi", path, kInf)});
    }
    if (family == "tilted") {
      if (!spec.contains("base")) fail(path + ".base", "missing required field");
      return tilt(parse(spec["base"], path + ".base"),
                  number(spec, "beta", path));
    }
    if (family == "affine") {
      if (!spec.contains("base")) fail(path + ".base", "missing required field");
      return affine(parse(spec["base"], path + ".base"),
                    number(spec, "scale", path, 1.0),
                    number(spec, "shift", path, 0.0));
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
  fail(path + ".family", "unknown family '" + family + "'");
}

}  // namespace

Density density_from_json(const nlohmann::json& spec, const std::string& path) {
  return parse(spec, path);
}

}  // namespace renyiq
