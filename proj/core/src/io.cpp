#include "rinf/io.hpp"

#include "rinf/error.hpp"

namespace rinf {

nlohmann::json portrait_to_json(const Portrait &p) {
  auto labels = nlohmann::json::array();
  for (const auto &l : p.labels())
    labels.push_back(l.images());
  return {{"sig", p.signature().to_string()}, {"depth", p.depth()}, {"labels", labels}};
}

Portrait portrait_from_json(const nlohmann::json &j) {
  try {
    auto sig = TreeSignature::parse(j.at("sig").get<std::string>());
    int depth = j.at("depth").get<int>();
    std::vector<Perm> labels;
    for (const auto &l : j.at("labels")) {
      auto images = l.get<std::vector<int>>();
      labels.push_back(Perm::from_images(images));
    }
    return Portrait::from_labels(sig, depth, std::move(labels));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorKind::Parse, std::string("malformed portrait: ") + e.what());
  }
}

nlohmann::json portrait_stats(const Portrait &p) {
  auto fixed = nlohmann::json::array();
  auto nontrivial = nlohmann::json::array();
  for (int j = 1; j <= p.depth(); ++j)
    fixed.push_back(fixed_count(p, j));
  for (int j = 0; j < p.depth(); ++j)
    nontrivial.push_back(nontrivial_label_count(p, j));
  return {{"stabilizer_depth", stabilizer_depth(p)},
          {"fixed_counts", fixed},
          {"nontrivial_labels", nontrivial}};
}

} // namespace rinf
