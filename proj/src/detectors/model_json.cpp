#include "dsentry/detectors/model_json.hpp"

#include <fstream>

namespace dsentry::detectors {

using nlohmann::json;

namespace {

json to_json(const stats::GaussianParams& g) { return {{"mean", g.mean}, {"std", g.std}}; }

stats::GaussianParams gaussian_from(const json& j) {
  stats::GaussianParams g{j.at("mean").get<double>(), j.at("std").get<double>()};
  if (!(g.std > 0.0)) throw ConfigError("gaussian std must be > 0");
  return g;
}

json to_json(const std::vector<stats::GaussianParams>& gs) {
  json arr = json::array();
  for (const auto& g : gs) arr.push_back(to_json(g));
  return arr;
}

std::vector<stats::GaussianParams> gaussians_from(const json& j) {
  std::vector<stats::GaussianParams> out;
  for (const auto& item : j) out.push_back(gaussian_from(item));
  return out;
}

json to_json(const ShiftSpec& s) { return {{"lower_mult", s.lower_mult}, {"upper_mult", s.upper_mult}}; }

ShiftSpec shift_from(const json& j) {
  ShiftSpec s{j.at("lower_mult").get<double>(), j.at("upper_mult").get<double>()};
  validate(s);
  return s;
}

json to_json(const stats::KernelCdf& k) {
  return {{"sample_points", k.sample_points}, {"bandwidth", k.bandwidth}};
}

stats::KernelCdf kernel_from(const json& j) {
  auto points = j.at("sample_points").get<std::vector<double>>();
  if (points.empty()) throw ConfigError("kernel CDF needs sample points");
  return stats::make_kernel_cdf(points, j.at("bandwidth").get<double>());
}

json to_json(const stats::GaussianMixture& m) {
  return {{"weights", m.weights}, {"components", to_json(m.components)}};
}

stats::GaussianMixture mixture_from(const json& j) {
  stats::GaussianMixture m{j.at("weights").get<std::vector<double>>(), gaussians_from(j.at("components"))};
  stats::validate(m);
  return m;
}

json to_json(const stats::EmbeddingModel& e) {
  return {{"duration_center", e.duration_center},
          {"duration_scale", e.duration_scale},
          {"power_center", e.power_center},
          {"power_scale", e.power_scale}};
}

stats::EmbeddingModel embedding_from(const json& j) {
  stats::EmbeddingModel e{j.at("duration_center").get<double>(), j.at("duration_scale").get<double>(),
                          j.at("power_center").get<double>(), j.at("power_scale").get<double>()};
  if (!(e.duration_scale > 0.0) || !(e.power_scale > 0.0)) throw ConfigError("embedding scales must be > 0");
  return e;
}

}  // namespace

json model_to_json(const TrainedModel& model) {
  json doc = std::visit(
      [](const auto& m) -> json {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, KsModel>) {
          return {{"baseline_duration", to_json(m.baseline_duration)},
                  {"baseline_power", to_json(m.baseline_power)},
                  {"window", m.window}};
        } else if constexpr (std::is_same_v<M, GCusumModel>) {
          return {{"duration_g0", to_json(m.duration_g0)},
                  {"power_g0", to_json(m.power_g0)},
                  {"shift", to_json(m.shift)}};
        } else if constexpr (std::is_same_v<M, GmCusumModel>) {
          return {{"duration_mix", to_json(m.duration_mix)},
                  {"power_mix", to_json(m.power_mix)},
                  {"shift", to_json(m.shift)}};
        } else {
          return {{"embedding", to_json(m.embedding)},
                  {"m", m.m},
                  {"energy_g0", to_json(m.energy_g0)},
                  {"power_g0", to_json(m.power_g0)},
                  {"shift", to_json(m.shift)}};
        }
      },
      model);
  doc["kind"] = std::string(kind_name(kind_of(model)));
  return doc;
}

TrainedModel model_from_json(const json& doc) {
  try {
    const auto kind = parse_kind(doc.at("kind").get<std::string>());
    switch (kind) {
      case DetectorKind::kKs: {
        KsModel m;
        m.baseline_duration = kernel_from(doc.at("baseline_duration"));
        m.baseline_power = kernel_from(doc.at("baseline_power"));
        m.window = doc.at("window").get<std::size_t>();
        if (m.window < 2) throw ConfigError("KS window must be >= 2");
        m.prepare();
        return m;
      }
      case DetectorKind::kGCusum:
        return GCusumModel{gaussian_from(doc.at("duration_g0")), gaussian_from(doc.at("power_g0")),
                           shift_from(doc.at("shift"))};
      case DetectorKind::kGmCusum:
        return GmCusumModel{mixture_from(doc.at("duration_mix")), mixture_from(doc.at("power_mix")),
                            shift_from(doc.at("shift"))};
      case DetectorKind::kMCusum: {
        MCusumModel m;
        m.embedding = embedding_from(doc.at("embedding"));
        m.m = doc.at("m").get<std::size_t>();
        m.energy_g0 = gaussians_from(doc.at("energy_g0"));
        m.power_g0 = gaussians_from(doc.at("power_g0"));
        m.shift = shift_from(doc.at("shift"));
        if (m.m < 1 || m.energy_g0.size() != m.m || m.power_g0.size() != m.m) {
          throw ConfigError("m_cusum model needs exactly m entries per cluster list");
        }
        return m;
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("model document: ") + e.what());
  } catch (const EstimationError& e) {
    throw ConfigError(std::string("model document: ") + e.what());
  }
  throw ConfigError("model document: unknown kind");
}

void write_model_file(const std::string& path, const TrainedModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

TrainedModel read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("model '" + path + "': " + e.what());
  }
  return model_from_json(doc);
}

}  // namespace dsentry::detectors
