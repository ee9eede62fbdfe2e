#include "rinf/quotient.hpp"

#include "rinf/error.hpp"
#include "rinf/hash.hpp"
#include "rinf/union_find.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <fstream>
#include <limits>
#include <map>

namespace rinf {

namespace {

constexpr ElementId kEmpty = std::numeric_limits<ElementId>::max();
constexpr const char *kCacheSchema = "rinf-quotient/1";

std::string to_hex(std::string_view bytes) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (unsigned char c : bytes) {
    out += digits[c >> 4];
    out += digits[c & 15];
  }
  return out;
}

std::string from_hex(std::string_view hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9')
      return c - '0';
    if (c >= 'a' && c <= 'f')
      return c - 'a' + 10;
    throw Error(ErrorKind::Parse, "bad hex digit in cache file");
  };
  if (hex.size() % 2)
    throw Error(ErrorKind::Parse, "odd hex length in cache file");
  std::string out(hex.size() / 2, '\0');
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = static_cast<char>(nibble(hex[2 * i]) * 16 + nibble(hex[2 * i + 1]));
  return out;
}

std::string hash_hex(std::uint64_t h) {
  std::string bytes(8, '\0');
  for (int i = 0; i < 8; ++i)
    bytes[static_cast<std::size_t>(7 - i)] = static_cast<char>((h >> (8 * i)) & 0xff);
  return to_hex(bytes);
}

} // namespace

std::uint64_t QuotientGroup::slot_hash(std::string_view code) const {
  return fnv1a(code);
}

void QuotientGroup::rehash(std::size_t capacity) {
  slots_.assign(capacity, kEmpty);
  const std::size_t mask = capacity - 1;
  for (ElementId id = 0; id < parent_.size(); ++id) {
    auto h = slot_hash(code(id)) & mask;
    while (slots_[h] != kEmpty)
      h = (h + 1) & mask;
    slots_[h] = id;
  }
}

std::optional<ElementId> QuotientGroup::find(const Portrait &g) const {
  if (g.depth() != depth_ || !(g.signature() == sig_))
    throw Error(ErrorKind::Structural,
                "portrait depth " + std::to_string(g.depth()) +
                    " does not match quotient depth " + std::to_string(depth_));
  auto c = g.encode();
  const std::size_t mask = slots_.size() - 1;
  for (auto h = slot_hash(c) & mask; slots_[h] != kEmpty; h = (h + 1) & mask)
    if (code(slots_[h]) == c)
      return slots_[h];
  return std::nullopt;
}

ElementId QuotientGroup::id_of(const Portrait &g) const {
  if (auto id = find(g))
    return *id;
  throw Error(ErrorKind::Normalization,
              "portrait is not in the depth-" + std::to_string(depth_) +
                  " quotient");
}

ElementId QuotientGroup::insert(std::string_view c, bool &inserted) {
  if ((parent_.size() + 1) * 2 > slots_.size())
    rehash(slots_.size() * 2);
  const std::size_t mask = slots_.size() - 1;
  auto h = slot_hash(c) & mask;
  for (; slots_[h] != kEmpty; h = (h + 1) & mask)
    if (code(slots_[h]) == c) {
      inserted = false;
      return slots_[h];
    }
  auto id = static_cast<ElementId>(parent_.size());
  codes_.append(c);
  parent_.push_back(0);
  via_.push_back(0);
  slots_[h] = id;
  inserted = true;
  return id;
}

std::string_view QuotientGroup::code(ElementId id) const {
  return std::string_view(codes_).substr(static_cast<std::size_t>(id) * stride_,
                                         stride_);
}

Portrait QuotientGroup::element(ElementId id) const {
  if (id >= order())
    throw Error(ErrorKind::Domain, "element id out of range");
  return Portrait::decode(sig_, depth_, code(id));
}

QuotientGroup QuotientGroup::build(const Evaluator &ev, int depth,
                                   std::uint64_t cap) {
  if (depth < 1)
    throw Error(ErrorKind::Precondition, "quotient depth must be >= 1");
  if (cap < 1)
    throw Error(ErrorKind::Precondition, "quotient cap must be >= 1");
  QuotientGroup q;
  q.depth_ = depth;
  q.sig_ = ev.signature();
  q.pres_hash_ = ev.presentation().fingerprint();
  q.stride_ = Portrait::encoded_size(q.sig_, depth);
  q.slots_.assign(1024, kEmpty);

  std::vector<Portrait> move_portraits;
  auto names = ev.presentation().generator_names();
  for (const auto &s : names) {
    q.moves_.push_back(Word::symbol(s));
    move_portraits.push_back(ev.symbol(s, depth));
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    auto inv = rinf::inverse(move_portraits[i]);
    if (!(inv == move_portraits[i])) {
      q.moves_.push_back(Word::symbol(names[i], -1));
      move_portraits.push_back(std::move(inv));
    }
  }
  if (q.moves_.size() > std::numeric_limits<std::uint16_t>::max())
    throw Error(ErrorKind::Resource, "too many generators");

  bool inserted = false;
  q.insert(Portrait::identity(q.sig_, depth).encode(), inserted);
  const std::size_t nm = q.moves_.size();
  for (ElementId cur = 0; cur < q.parent_.size(); ++cur) {
    Portrait p = q.element(cur);
    for (std::size_t j = 0; j < nm; ++j) {
      auto next = compose(move_portraits[j], p);
      auto id = q.insert(next.encode(), inserted);
      if (inserted) {
        if (q.parent_.size() > cap)
          throw Error(ErrorKind::Resource,
                      "quotient at depth " + std::to_string(depth) +
                          " exceeds cap " + std::to_string(cap) + " (found " +
                          std::to_string(q.parent_.size()) +
                          " elements so far)");
        q.parent_[id] = cur;
        q.via_[id] = static_cast<std::uint16_t>(j);
      }
      q.lmul_.push_back(id);
    }
  }
  for (const auto &m : move_portraits)
    q.move_ids_.push_back(q.id_of(m));
  return q;
}

ElementId QuotientGroup::multiply(ElementId a, ElementId b) const {
  return id_of(compose(element(a), element(b)));
}

ElementId QuotientGroup::inverse(ElementId a) const {
  return id_of(rinf::inverse(element(a)));
}

Word QuotientGroup::rep_word(ElementId id) const {
  Word w;
  for (ElementId cur = id; cur != 0; cur = parent_[cur])
    w.letters.push_back(moves_[via_[cur]].letters.front());
  return w;
}

std::size_t QuotientGroup::rep_length(ElementId id) const {
  std::size_t n = 0;
  for (ElementId cur = id; cur != 0; cur = parent_[cur])
    ++n;
  return n;
}

int QuotientGroup::stabilizer_depth(ElementId id) const {
  return rinf::stabilizer_depth(element(id));
}

std::string QuotientGroup::cache_file_name(const Evaluator &ev, int depth) {
  return ev.presentation().name() + "-" +
         hash_hex(ev.presentation().fingerprint()) + "-d" +
         std::to_string(depth) + ".json";
}

void QuotientGroup::save(const std::filesystem::path &file) const {
  nlohmann::json j;
  j["schema"] = kCacheSchema;
  j["presentation_hash"] = hash_hex(pres_hash_);
  j["depth"] = depth_;
  j["order"] = order();
  std::vector<std::string> moves;
  for (const auto &m : moves_)
    moves.push_back(m.to_string());
  j["moves"] = moves;
  j["codes"] = to_hex(codes_);
  j["parent"] = parent_;
  j["via"] = via_;
  j["lmul"] = lmul_;
  std::ofstream out(file);
  if (!out)
    throw Error(ErrorKind::Resource, "cannot write cache file " + file.string());
  out << j.dump();
}

std::optional<QuotientGroup>
QuotientGroup::load(const std::filesystem::path &file, const Evaluator &ev,
                    int depth) {
  std::ifstream in(file);
  if (!in)
    return std::nullopt;
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception &) {
    return std::nullopt;
  }
  if (j.value("schema", "") != kCacheSchema ||
      j.value("presentation_hash", "") !=
          hash_hex(ev.presentation().fingerprint()) ||
      j.value("depth", -1) != depth)
    return std::nullopt;

  QuotientGroup q;
  q.depth_ = depth;
  q.sig_ = ev.signature();
  q.pres_hash_ = ev.presentation().fingerprint();
  q.stride_ = Portrait::encoded_size(q.sig_, depth);
  for (const auto &m : j.at("moves"))
    q.moves_.push_back(Word::parse(m.get<std::string>()));
  q.codes_ = from_hex(j.at("codes").get<std::string>());
  q.parent_ = j.at("parent").get<std::vector<ElementId>>();
  q.via_ = j.at("via").get<std::vector<std::uint16_t>>();
  q.lmul_ = j.at("lmul").get<std::vector<ElementId>>();
  if (q.codes_.size() != q.parent_.size() * q.stride_ ||
      q.via_.size() != q.parent_.size() ||
      q.lmul_.size() != q.parent_.size() * q.moves_.size() ||
      j.value("order", std::size_t{0}) != q.parent_.size())
    return std::nullopt;
  std::size_t capacity = 1024;
  while (capacity < 2 * q.parent_.size())
    capacity *= 2;
  q.rehash(capacity);
  for (const auto &m : q.moves_)
    q.move_ids_.push_back(q.id_of(ev.eval(m, depth)));
  return q;
}

QuotientGroup
QuotientGroup::build_cached(const Evaluator &ev, int depth, std::uint64_t cap,
                            const std::optional<std::filesystem::path> &dir) {
  if (!dir)
    return build(ev, depth, cap);
  auto file = *dir / cache_file_name(ev, depth);
  if (auto q = load(file, ev, depth); q && q->order() <= cap)
    return std::move(*q);
  auto q = build(ev, depth, cap);
  std::filesystem::create_directories(*dir);
  q.save(file);
  return q;
}

std::vector<ElementId> truncation_map(const QuotientGroup &fine,
                                      const QuotientGroup &coarse) {
  if (coarse.depth() > fine.depth())
    throw Error(ErrorKind::Precondition,
                "truncation target is deeper than its source");
  std::vector<ElementId> out(fine.order());
  for (ElementId id = 0; id < fine.order(); ++id)
    out[id] = coarse.id_of(truncate(fine.element(id), coarse.depth()));
  return out;
}

namespace {

void require_bijection(const std::vector<ElementId> &table) {
  std::vector<bool> hit(table.size(), false);
  for (auto v : table) {
    if (v >= table.size() || hit[v])
      throw Error(ErrorKind::NotWellDefined,
                  "induced map is not a bijection of the quotient");
    hit[v] = true;
  }
}

} // namespace

InducedAutomorphism InducedAutomorphism::induce(const QuotientGroup &q,
                                                const Evaluator &ev,
                                                const AutomorphismSpec &spec) {
  const auto &pres = ev.presentation();
  InducedAutomorphism out;
  out.description_ = spec.describe();
  const int d = q.depth();

  std::vector<ElementId> move_images(q.move_count());
  if (spec.is_conjugation()) {
    auto w = *spec.conjugator();
    pres.validate(w);
    auto t = ev.eval(w, d);
    auto tinv = inverse(t);
    for (std::size_t j = 0; j < q.move_count(); ++j) {
      auto image = compose(compose(t, q.element(q.move_element(j))), tinv);
      auto id = q.find(image);
      if (!id)
        throw Error(ErrorKind::Normalization,
                    "conjugation by " + w.to_string() + " maps " +
                        q.moves()[j].to_string() +
                        " outside the depth-" + std::to_string(d) +
                        " quotient");
      move_images[j] = *id;
    }
  } else {
    for (std::size_t j = 0; j < q.move_count(); ++j) {
      auto image = apply_spec(pres, spec, q.moves()[j]);
      auto id = q.find(ev.eval(image, d));
      if (!id)
        throw Error(ErrorKind::Normalization,
                    "image " + image.to_string() + " of " +
                        q.moves()[j].to_string() + " is outside the depth-" +
                        std::to_string(d) + " quotient");
      move_images[j] = *id;
    }
  }

  // Spread images along the BFS tree: id = move * parent.
  out.table_.assign(q.order(), 0);
  std::vector<Portrait> move_portraits;
  for (auto id : move_images)
    move_portraits.push_back(q.element(id));
  {
    // Replaying the BFS discovers each element from its tree parent, so
    // every image is set before its element is expanded.
    std::vector<bool> done(q.order(), false);
    done[0] = true;
    for (ElementId cur = 0; cur < q.order(); ++cur) {
      Portrait img = q.element(out.table_[cur]);
      for (std::size_t j = 0; j < q.move_count(); ++j) {
        auto next = q.left_multiply(j, cur);
        if (done[next])
          continue;
        out.table_[next] = q.id_of(compose(move_portraits[j], img));
        done[next] = true;
      }
    }
  }

  if (spec.is_conjugation()) {
    out.check_log_ = "conjugation by " + spec.conjugator()->to_string() +
                     " keeps every generator in the depth-" +
                     std::to_string(d) + " quotient";
  } else {
    std::size_t checked = 0;
    for (ElementId cur = 0; cur < q.order(); ++cur) {
      Portrait img = q.element(out.table_[cur]);
      for (std::size_t j = 0; j < q.move_count(); ++j) {
        auto expect = q.id_of(compose(move_portraits[j], img));
        if (out.table_[q.left_multiply(j, cur)] != expect)
          throw Error(ErrorKind::NotWellDefined,
                      spec.describe() + " is not well defined on the depth-" +
                          std::to_string(d) + " quotient: relation broken at " +
                          q.moves()[j].to_string() + "*" +
                          q.rep_word(cur).to_string());
        ++checked;
      }
    }
    out.check_log_ = "multiplicativity verified on all " +
                     std::to_string(checked) + " (generator, element) pairs";
  }
  require_bijection(out.table_);
  out.check_log_ += "; bijective on " + std::to_string(q.order()) + " elements";
  return out;
}

InducedAutomorphism
InducedAutomorphism::from_table(const QuotientGroup &q,
                                std::vector<ElementId> table,
                                std::string description) {
  if (table.size() != q.order())
    throw Error(ErrorKind::Structural, "image table has wrong size");
  require_bijection(table);
  InducedAutomorphism out;
  out.table_ = std::move(table);
  out.description_ = std::move(description);
  out.check_log_ = "explicit table";
  return out;
}

bool InducedAutomorphism::is_identity() const {
  for (ElementId i = 0; i < table_.size(); ++i)
    if (table_[i] != i)
      return false;
  return true;
}

InducedAutomorphism twist(const QuotientGroup &q, const InducedAutomorphism &phi,
                          ElementId g) {
  auto gp = q.element(g);
  auto ginv = inverse(gp);
  std::vector<ElementId> table(q.order());
  for (ElementId id = 0; id < q.order(); ++id)
    table[id] = q.id_of(compose(compose(gp, q.element(phi(id))), ginv));
  return InducedAutomorphism::from_table(
      q, std::move(table),
      "inner(" + q.rep_word(g).to_string() + ") o " + phi.description());
}

bool is_automorphism(const QuotientGroup &q, const InducedAutomorphism &phi) {
  std::vector<bool> hit(q.order(), false);
  for (ElementId id = 0; id < q.order(); ++id) {
    if (phi(id) >= q.order() || hit[phi(id)])
      return false;
    hit[phi(id)] = true;
  }
  std::vector<Portrait> images;
  images.reserve(q.order());
  for (ElementId id = 0; id < q.order(); ++id)
    images.push_back(q.element(phi(id)));
  for (ElementId a = 0; a < q.order(); ++a)
    for (ElementId b = 0; b < q.order(); ++b)
      if (q.id_of(compose(images[a], images[b])) != phi(q.multiply(a, b)))
        return false;
  return true;
}

std::vector<ElementId> TwistedPartition::members(std::uint32_t cls) const {
  std::vector<ElementId> out;
  for (ElementId id = 0; id < class_of.size(); ++id)
    if (class_of[id] == cls)
      out.push_back(id);
  return out;
}

namespace {

TwistedPartition number_classes(std::size_t n,
                                const std::vector<std::uint32_t> &root) {
  TwistedPartition part;
  part.class_of.assign(n, 0);
  std::map<std::uint32_t, std::uint32_t> index;
  for (ElementId id = 0; id < n; ++id) {
    auto [it, fresh] =
        index.try_emplace(root[id], static_cast<std::uint32_t>(index.size()));
    if (fresh)
      part.representative.push_back(id);
    part.class_of[id] = it->second;
  }
  return part;
}

} // namespace

TwistedPartition twisted_classes(const QuotientGroup &q,
                                 const InducedAutomorphism &phi) {
  const auto n = q.order();
  std::vector<Portrait> right;
  for (std::size_t j = 0; j < q.move_count(); ++j)
    right.push_back(inverse(q.element(phi(q.move_element(j)))));
  UnionFind uf(n);
  for (ElementId id = 0; id < n; ++id)
    for (std::size_t j = 0; j < q.move_count(); ++j) {
      auto left = q.left_multiply(j, id);
      uf.unite(id, q.id_of(compose(q.element(left), right[j])));
    }
  std::vector<std::uint32_t> root(n);
  for (ElementId id = 0; id < n; ++id)
    root[id] = uf.find(id);
  return number_classes(n, root);
}

TwistedPartition twisted_classes_bruteforce(const QuotientGroup &q,
                                            const InducedAutomorphism &phi) {
  const auto n = q.order();
  std::vector<Portrait> elems, phi_inv;
  elems.reserve(n);
  phi_inv.reserve(n);
  for (ElementId id = 0; id < n; ++id) {
    elems.push_back(q.element(id));
    phi_inv.push_back(inverse(q.element(phi(id))));
  }
  constexpr std::uint32_t kUnseen = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> root(n, kUnseen);
  for (ElementId id = 0; id < n; ++id) {
    if (root[id] != kUnseen)
      continue;
    for (ElementId h = 0; h < n; ++h)
      root[q.id_of(compose(compose(elems[h], elems[id]), phi_inv[h]))] = id;
  }
  return number_classes(n, root);
}

bool class_meets_stabilizer(const QuotientGroup &q, const TwistedPartition &part,
                            std::uint32_t cls, int n) {
  if (cls >= part.count())
    throw Error(ErrorKind::Domain, "bad class id " + std::to_string(cls));
  if (n > q.depth())
    throw Error(ErrorKind::OutOfDepth,
                "stabilizer level " + std::to_string(n) +
                    " exceeds quotient depth " + std::to_string(q.depth()));
  for (ElementId id = 0; id < q.order(); ++id)
    if (part.class_of[id] == cls && q.stabilizer_depth(id) >= n)
      return true;
  return false;
}

bool verify_shift_lemma(const QuotientGroup &q, const InducedAutomorphism &phi,
                        ElementId k) {
  auto kinv = q.inverse(k);
  auto psi = twist(q, phi, kinv);
  auto P = twisted_classes(q, phi);
  auto R = twisted_classes(q, psi);
  if (P.count() != R.count())
    return false;
  auto kp = q.element(k);
  std::vector<std::uint32_t> target(P.count(), std::numeric_limits<std::uint32_t>::max());
  std::vector<std::size_t> size_p(P.count(), 0), size_r(R.count(), 0);
  for (ElementId id = 0; id < q.order(); ++id) {
    auto shifted = q.id_of(compose(q.element(id), kp));
    auto c = P.class_of[id];
    auto r = R.class_of[shifted];
    if (target[c] == std::numeric_limits<std::uint32_t>::max())
      target[c] = r;
    else if (target[c] != r)
      return false;
    ++size_p[c];
    ++size_r[r];
  }
  std::vector<bool> used(R.count(), false);
  for (std::uint32_t c = 0; c < P.count(); ++c) {
    if (used[target[c]] || size_p[c] != size_r[target[c]])
      return false;
    used[target[c]] = true;
  }
  return true;
}

std::vector<LevelBound>
reidemeister_lower_bounds(const Evaluator &ev, const AutomorphismSpec &spec,
                          int d_max, std::uint64_t cap,
                          const std::optional<std::filesystem::path> &cache) {
  std::vector<LevelBound> out;
  for (int d = 1; d <= d_max; ++d) {
    auto q = QuotientGroup::build_cached(ev, d, cap, cache);
    auto phi = InducedAutomorphism::induce(q, ev, spec);
    auto part = twisted_classes(q, phi);
    out.push_back({d, q.order(), part.count(), phi.check_log()});
  }
  return out;
}

} // namespace rinf
