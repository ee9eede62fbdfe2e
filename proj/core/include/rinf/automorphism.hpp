#pragma once

#include "rinf/presentation.hpp"
#include "rinf/word.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace rinf {

/// phi(q) = t q t^-1 for the isometry t named by `conjugator`, which may use
/// normalizer symbols and section tuples.
struct ConjugationBy {
  Word conjugator;
};

/// phi(s) = images[s] for every generator s; generators without an entry are
/// fixed. `realizer`, when known, is an isometry inducing the same map.
struct GeneratorImages {
  std::map<std::string, Word> images;
  std::optional<Word> realizer;
};

class AutomorphismSpec {
public:
  AutomorphismSpec() = default;
  AutomorphismSpec(ConjugationBy c, std::string label = {});
  AutomorphismSpec(GeneratorImages g, std::string label = {});

  static AutomorphismSpec identity();

  const std::variant<ConjugationBy, GeneratorImages> &form() const {
    return form_;
  }
  bool is_conjugation() const {
    return std::holds_alternative<ConjugationBy>(form_);
  }
  /// The conjugating isometry: the ConjugationBy word or a known realizer.
  std::optional<Word> conjugator() const;

  /// Spec string accepted by parse_spec that reproduces this spec.
  std::string describe() const;

private:
  std::variant<ConjugationBy, GeneratorImages> form_{ConjugationBy{}};
  std::string label_;
};

/// The image word phi(w). Generator images are substituted letter by letter;
/// conjugations are applied formally as t*w*t^-1.
Word apply_spec(const Presentation &p, const AutomorphismSpec &phi,
                const Word &w);

/// outer o inner.
AutomorphismSpec compose(const Presentation &p, const AutomorphismSpec &outer,
                         const AutomorphismSpec &inner);
/// tau_g o phi, i.e. q -> g phi(q) g^-1.
AutomorphismSpec inner_twist(const Presentation &p, const Word &g,
                             const AutomorphismSpec &phi);

/// Gupta-Sidki automorphisms: tau1 (x -> x^-1, g -> g), tau2 (x -> x,
/// g -> g^-1), tau3 = tau2 o tau1.
AutomorphismSpec spec_tau(int i);

/// Grigorchuk family: conjugation by fL = (1,(ad)^2,1,(ad)^2,...) on level L.
AutomorphismSpec spec_family(int level);

/// identity | tau1 | tau2 | tau3 | family:<L> | conj:<word> |
/// images:<s>=<word>;<s>=<word>...[@<realizer word>]
AutomorphismSpec parse_spec(const Presentation &p, std::string_view text);

} // namespace rinf
