#include "rinf/tree.hpp"

#include "rinf/error.hpp"
#include "rinf/hash.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <numeric>

namespace rinf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Structural:
    return "structural";
  case ErrorKind::OutOfDepth:
    return "out-of-depth";
  case ErrorKind::Domain:
    return "domain";
  case ErrorKind::Parse:
    return "parse";
  case ErrorKind::Unresolved:
    return "unresolved";
  case ErrorKind::Resource:
    return "resource";
  case ErrorKind::NotFound:
    return "not-found";
  case ErrorKind::Precondition:
    return "precondition";
  case ErrorKind::Normalization:
    return "normalization";
  case ErrorKind::NotWellDefined:
    return "not-well-defined";
  case ErrorKind::Unsupported:
    return "unsupported";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// TreeSignature

TreeSignature::TreeSignature(std::vector<int> prefix, int tail)
    : prefix_(std::move(prefix)), tail_(tail) {
  auto check = [](int k) {
    if (k < 2 || k > Perm::kMaxDegree)
      throw Error(ErrorKind::Domain,
                  "branching index must lie in [2, 8], got " +
                      std::to_string(k));
  };
  check(tail_);
  for (int k : prefix_)
    check(k);
  while (!prefix_.empty() && prefix_.back() == tail_)
    prefix_.pop_back();
}

TreeSignature TreeSignature::parse(std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
      s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
      s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "binary")
    return binary();
  if (text == "ternary")
    return ternary();
  std::vector<int> values;
  while (!text.empty()) {
    auto comma = text.find(',');
    auto item = trim(text.substr(0, comma));
    int k = 0;
    auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), k);
    if (ec != std::errc() || ptr != item.data() + item.size())
      throw Error(ErrorKind::Parse,
                  "bad branching index '" + std::string(item) + "'");
    values.push_back(k);
    if (comma == std::string_view::npos)
      break;
    text.remove_prefix(comma + 1);
  }
  if (values.empty())
    throw Error(ErrorKind::Parse, "empty signature");
  int tail = values.back();
  values.pop_back();
  return TreeSignature(std::move(values), tail);
}

int TreeSignature::branching(int level) const {
  if (level < 0)
    throw Error(ErrorKind::Domain, "negative level");
  return static_cast<std::size_t>(level) < prefix_.size() ? prefix_[level]
                                                          : tail_;
}

std::uint64_t TreeSignature::level_size(int level) const {
  std::uint64_t n = 1;
  for (int j = 0; j < level; ++j) {
    auto k = static_cast<std::uint64_t>(branching(j));
    if (n > std::numeric_limits<std::uint64_t>::max() / k)
      throw Error(ErrorKind::Resource, "level size overflows 64 bits");
    n *= k;
  }
  return n;
}

std::uint64_t TreeSignature::internal_count(int depth) const {
  std::uint64_t total = 0;
  for (int j = 0; j < depth; ++j)
    total += level_size(j);
  return total;
}

TreeSignature TreeSignature::shifted(int levels) const {
  auto drop = std::min<std::size_t>(static_cast<std::size_t>(levels),
                                    prefix_.size());
  return TreeSignature(
      std::vector<int>(prefix_.begin() + static_cast<long>(drop),
                       prefix_.end()),
      tail_);
}

int TreeSignature::max_branching(int depth) const {
  int k = 0;
  for (int j = 0; j < depth; ++j)
    k = std::max(k, branching(j));
  return k;
}

std::string TreeSignature::to_string() const {
  if (prefix_.empty()) {
    if (tail_ == 2)
      return "binary";
    if (tail_ == 3)
      return "ternary";
  }
  std::string out;
  for (int k : prefix_)
    out += std::to_string(k) + ",";
  return out + std::to_string(tail_);
}

// ---------------------------------------------------------------------------
// Vertex

Vertex Vertex::child(int c) const {
  Vertex v = *this;
  v.path.push_back(c);
  return v;
}

std::string Vertex::to_string() const {
  if (path.empty())
    return "()";
  std::string out;
  for (int c : path)
    out += std::to_string(c);
  return out;
}

std::uint64_t vertex_index(const TreeSignature &sig, const Vertex &v) {
  std::uint64_t index = 0;
  for (int j = 0; j < v.level(); ++j) {
    int k = sig.branching(j);
    int c = v.path[static_cast<std::size_t>(j)];
    if (c < 0 || c >= k)
      throw Error(ErrorKind::Domain, "vertex " + v.to_string() +
                                         " has child index out of range");
    index = index * static_cast<std::uint64_t>(k) +
            static_cast<std::uint64_t>(c);
  }
  return index;
}

Vertex vertex_at(const TreeSignature &sig, int level, std::uint64_t index) {
  if (index >= sig.level_size(level))
    throw Error(ErrorKind::Domain, "vertex index out of range");
  Vertex v;
  v.path.resize(static_cast<std::size_t>(level));
  for (int j = level - 1; j >= 0; --j) {
    auto k = static_cast<std::uint64_t>(sig.branching(j));
    v.path[static_cast<std::size_t>(j)] = static_cast<int>(index % k);
    index /= k;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Perm

Perm::Perm(int degree) : degree_(static_cast<std::uint8_t>(degree)) {
  if (degree < 0 || degree > kMaxDegree)
    throw Error(ErrorKind::Domain, "permutation degree out of range");
  for (int i = 0; i < degree; ++i)
    images_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(i);
}

Perm Perm::transposition(int degree, int i, int j) {
  Perm p(degree);
  if (i < 0 || j < 0 || i >= degree || j >= degree)
    throw Error(ErrorKind::Domain, "transposition point out of range");
  std::swap(p.images_[static_cast<std::size_t>(i)],
            p.images_[static_cast<std::size_t>(j)]);
  return p;
}

Perm Perm::cycle(int degree) {
  Perm p(degree);
  for (int i = 0; i < degree; ++i)
    p.images_[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((i + 1) % degree);
  return p;
}

Perm Perm::from_images(std::span<const int> images) {
  auto k = static_cast<int>(images.size());
  Perm p(k);
  std::array<bool, kMaxDegree> seen{};
  for (int i = 0; i < k; ++i) {
    int x = images[static_cast<std::size_t>(i)];
    if (x < 0 || x >= k || seen[static_cast<std::size_t>(x)])
      throw Error(ErrorKind::Domain, "image array is not a bijection");
    seen[static_cast<std::size_t>(x)] = true;
    p.images_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(x);
  }
  return p;
}

Perm Perm::operator*(const Perm &rhs) const {
  if (degree_ != rhs.degree_)
    throw Error(ErrorKind::Structural, "permutation degree mismatch");
  Perm out(degree_);
  for (int i = 0; i < degree_; ++i)
    out.images_[static_cast<std::size_t>(i)] =
        images_[rhs.images_[static_cast<std::size_t>(i)]];
  return out;
}

Perm Perm::inverse() const {
  Perm out(degree_);
  for (int i = 0; i < degree_; ++i)
    out.images_[images_[static_cast<std::size_t>(i)]] =
        static_cast<std::uint8_t>(i);
  return out;
}

Perm Perm::pow(int e) const {
  Perm base = e < 0 ? inverse() : *this;
  Perm out(degree_);
  for (int i = 0, n = e < 0 ? -e : e; i < n; ++i)
    out = base * out;
  return out;
}

bool Perm::is_identity() const {
  for (int i = 0; i < degree_; ++i)
    if (images_[static_cast<std::size_t>(i)] != i)
      return false;
  return true;
}

int Perm::fixed_points() const {
  int n = 0;
  for (int i = 0; i < degree_; ++i)
    n += images_[static_cast<std::size_t>(i)] == i;
  return n;
}

std::vector<int> Perm::images() const {
  return {images_.begin(), images_.begin() + degree_};
}

std::uint32_t Perm::rank() const {
  // Lehmer code read as a mixed-radix number.
  std::uint32_t r = 0;
  for (int i = 0; i < degree_; ++i) {
    std::uint32_t smaller = 0;
    for (int j = i + 1; j < degree_; ++j)
      smaller += images_[static_cast<std::size_t>(j)] <
                 images_[static_cast<std::size_t>(i)];
    r = r * static_cast<std::uint32_t>(degree_ - i) + smaller;
  }
  return r;
}

Perm Perm::unrank(int degree, std::uint32_t rank) {
  if (degree < 0 || degree > kMaxDegree)
    throw Error(ErrorKind::Domain, "permutation degree out of range");
  // All of Sym(k) in lexicographic order, which is the Lehmer rank order.
  static const auto tables = [] {
    std::array<std::vector<Perm>, kMaxDegree + 1> t;
    for (int k = 0; k <= kMaxDegree; ++k) {
      std::vector<int> images(static_cast<std::size_t>(k));
      std::iota(images.begin(), images.end(), 0);
      do
        t[static_cast<std::size_t>(k)].push_back(from_images(images));
      while (std::next_permutation(images.begin(), images.end()));
    }
    return t;
  }();
  const auto &table = tables[static_cast<std::size_t>(degree)];
  if (rank >= table.size())
    throw Error(ErrorKind::Domain, "permutation rank out of range");
  return table[rank];
}

std::string Perm::to_string() const {
  std::string out = "[";
  for (int i = 0; i < degree_; ++i) {
    if (i)
      out += ",";
    out += std::to_string(images_[static_cast<std::size_t>(i)]);
  }
  return out + "]";
}

std::uint64_t factorial(int k) {
  std::uint64_t f = 1;
  for (int i = 2; i <= k; ++i)
    f *= static_cast<std::uint64_t>(i);
  return f;
}

namespace {

int bits_for_degree(int k) {
  auto n = factorial(k);
  int bits = 0;
  while ((std::uint64_t{1} << bits) < n)
    ++bits;
  return bits;
}

} // namespace

// ---------------------------------------------------------------------------
// Portrait

void Portrait::init_offsets() {
  offsets_.assign(static_cast<std::size_t>(depth_) + 1, 0);
  for (int j = 0; j < depth_; ++j)
    offsets_[static_cast<std::size_t>(j) + 1] =
        offsets_[static_cast<std::size_t>(j)] + sig_.level_size(j);
}

Portrait Portrait::identity(const TreeSignature &sig, int depth) {
  if (depth < 0)
    throw Error(ErrorKind::Domain, "negative depth");
  Portrait p;
  p.sig_ = sig;
  p.depth_ = depth;
  p.init_offsets();
  p.labels_.reserve(p.offsets_.back());
  for (int j = 0; j < depth; ++j)
    p.labels_.insert(p.labels_.end(), sig.level_size(j),
                     Perm::identity(sig.branching(j)));
  return p;
}

Portrait Portrait::from_labels(const TreeSignature &sig, int depth,
                               std::vector<Perm> labels) {
  Portrait p;
  p.sig_ = sig;
  p.depth_ = depth;
  p.init_offsets();
  if (labels.size() != p.offsets_.back())
    throw Error(ErrorKind::Structural,
                "expected " + std::to_string(p.offsets_.back()) +
                    " labels, got " + std::to_string(labels.size()));
  for (int j = 0; j < depth; ++j)
    for (auto i = p.offset(j); i < p.offset(j + 1); ++i)
      if (labels[i].degree() != sig.branching(j))
        throw Error(ErrorKind::Structural,
                    "label arity does not match branching at level " +
                        std::to_string(j));
  p.labels_ = std::move(labels);
  return p;
}

Portrait Portrait::assemble(const TreeSignature &sig, const Perm &root,
                            std::span<const Portrait> children) {
  int k = sig.branching(0);
  if (root.degree() != k || static_cast<int>(children.size()) != k)
    throw Error(ErrorKind::Structural, "root arity mismatch in assemble");
  int child_depth = children.front().depth();
  auto child_sig = sig.shifted();
  for (const auto &c : children)
    if (c.depth() != child_depth || !(c.signature() == child_sig))
      throw Error(ErrorKind::Structural, "child portraits disagree");
  Portrait p;
  p.sig_ = sig;
  p.depth_ = child_depth + 1;
  p.init_offsets();
  p.labels_.reserve(p.offsets_.back());
  p.labels_.push_back(root);
  for (int j = 0; j < child_depth; ++j)
    for (const auto &c : children) {
      auto level = c.level_labels(j);
      p.labels_.insert(p.labels_.end(), level.begin(), level.end());
    }
  return p;
}

const Perm &Portrait::label(int level, std::uint64_t index) const {
  if (level < 0 || level >= depth_)
    throw Error(ErrorKind::OutOfDepth,
                "level " + std::to_string(level) + " has no labels at depth " +
                    std::to_string(depth_));
  return labels_[offset(level) + index];
}

const Perm &Portrait::label(const Vertex &v) const {
  return label(v.level(), vertex_index(sig_, v));
}

std::span<const Perm> Portrait::level_labels(int level) const {
  if (level < 0 || level >= depth_)
    throw Error(ErrorKind::OutOfDepth, "level outside portrait");
  return {labels_.data() + offset(level),
          static_cast<std::size_t>(offset(level + 1) - offset(level))};
}

Portrait Portrait::section(const Vertex &v) const {
  if (v.level() > depth_)
    throw Error(ErrorKind::OutOfDepth, "vertex below portrait depth");
  auto base = vertex_index(sig_, v);
  auto sub_sig = sig_.shifted(v.level());
  int sub_depth = depth_ - v.level();
  std::vector<Perm> labels;
  for (int r = 0; r < sub_depth; ++r) {
    auto width = sub_sig.level_size(r);
    auto start = offset(v.level() + r) + base * width;
    labels.insert(labels.end(), labels_.begin() + static_cast<long>(start),
                  labels_.begin() + static_cast<long>(start + width));
  }
  return from_labels(sub_sig, sub_depth, std::move(labels));
}

std::size_t Portrait::encoded_size(const TreeSignature &sig, int depth) {
  std::uint64_t bits = 0;
  for (int j = 0; j < depth; ++j)
    bits += sig.level_size(j) *
            static_cast<std::uint64_t>(bits_for_degree(sig.branching(j)));
  return static_cast<std::size_t>((bits + 7) / 8);
}

std::string Portrait::encode() const {
  std::string out(encoded_size(sig_, depth_), '\0');
  std::uint64_t bit = 0;
  for (int j = 0; j < depth_; ++j) {
    int width = bits_for_degree(sig_.branching(j));
    for (auto i = offset(j); i < offset(j + 1); ++i) {
      auto r = labels_[i].rank();
      for (int b = 0; b < width; ++b, ++bit)
        if (r >> b & 1u)
          out[bit >> 3] = static_cast<char>(
              static_cast<unsigned char>(out[bit >> 3]) | (1u << (bit & 7)));
    }
  }
  return out;
}

Portrait Portrait::decode(const TreeSignature &sig, int depth,
                          std::string_view bytes) {
  if (bytes.size() != encoded_size(sig, depth))
    throw Error(ErrorKind::Structural, "encoded portrait has wrong length");
  std::vector<Perm> labels;
  labels.reserve(sig.internal_count(depth));
  std::uint64_t bit = 0;
  for (int j = 0; j < depth; ++j) {
    int k = sig.branching(j);
    int width = bits_for_degree(k);
    for (std::uint64_t i = 0, n = sig.level_size(j); i < n; ++i) {
      std::uint32_t r = 0;
      for (int b = 0; b < width; ++b, ++bit)
        if (static_cast<unsigned char>(bytes[bit >> 3]) >> (bit & 7) & 1u)
          r |= 1u << b;
      labels.push_back(Perm::unrank(k, r));
    }
  }
  return from_labels(sig, depth, std::move(labels));
}

std::size_t Portrait::hash() const {
  Fnv1a h;
  h.add(static_cast<std::uint64_t>(depth_));
  for (const auto &p : labels_)
    h.add(static_cast<std::uint64_t>(p.rank()));
  return static_cast<std::size_t>(h.value());
}

namespace {

void require_compatible(const Portrait &g, const Portrait &h,
                        const char *op) {
  if (g.depth() != h.depth() || !(g.signature() == h.signature()))
    throw Error(ErrorKind::Structural,
                std::string(op) + ": signature/depth mismatch (" +
                    std::to_string(g.depth()) + " vs " +
                    std::to_string(h.depth()) + ")");
}

// Advance a level image table one level down.
std::vector<std::uint64_t> next_images(const Portrait &g, int level,
                                       const std::vector<std::uint64_t> &img) {
  auto k = static_cast<std::uint64_t>(g.signature().branching(level));
  auto labels = g.level_labels(level);
  std::vector<std::uint64_t> out(img.size() * k);
  for (std::size_t u = 0; u < img.size(); ++u)
    for (std::uint64_t c = 0; c < k; ++c)
      out[u * k + c] =
          img[u] * k + static_cast<std::uint64_t>(labels[u](static_cast<int>(c)));
  return out;
}

} // namespace

Portrait compose(const Portrait &g, const Portrait &h) {
  require_compatible(g, h, "compose");
  Portrait out;
  out.sig_ = g.sig_;
  out.depth_ = g.depth_;
  out.offsets_ = g.offsets_;
  out.labels_.resize(g.labels_.size());
  std::vector<std::uint64_t> himg{0};
  for (int j = 0; j < g.depth_; ++j) {
    auto base = g.offset(j);
    for (std::size_t u = 0; u < himg.size(); ++u)
      out.labels_[base + u] = g.labels_[base + himg[u]] * h.labels_[base + u];
    if (j + 1 < g.depth_)
      himg = next_images(h, j, himg);
  }
  return out;
}

Portrait inverse(const Portrait &g) {
  Portrait out;
  out.sig_ = g.sig_;
  out.depth_ = g.depth_;
  out.offsets_ = g.offsets_;
  out.labels_.resize(g.labels_.size());
  std::vector<std::uint64_t> img{0};
  for (int j = 0; j < g.depth_; ++j) {
    auto base = g.offset(j);
    for (std::size_t u = 0; u < img.size(); ++u)
      out.labels_[base + img[u]] = g.labels_[base + u].inverse();
    if (j + 1 < g.depth_)
      img = next_images(g, j, img);
  }
  return out;
}

Portrait conjugate(const Portrait &h, const Portrait &g) {
  return compose(compose(h, g), inverse(h));
}

Portrait power(const Portrait &g, int e) {
  Portrait base = e < 0 ? inverse(g) : g;
  Portrait out = Portrait::identity(g.signature(), g.depth());
  for (int i = 0, n = e < 0 ? -e : e; i < n; ++i)
    out = compose(base, out);
  return out;
}

Portrait truncate(const Portrait &g, int depth) {
  if (depth < 0 || depth > g.depth())
    throw Error(ErrorKind::OutOfDepth, "cannot truncate portrait of depth " +
                                           std::to_string(g.depth()) +
                                           " to " + std::to_string(depth));
  auto n = g.signature().internal_count(depth);
  return Portrait::from_labels(
      g.signature(), depth,
      std::vector<Perm>(g.labels().begin(),
                        g.labels().begin() + static_cast<long>(n)));
}

std::vector<std::uint64_t> level_action(const Portrait &g, int level) {
  if (level < 0 || level > g.depth())
    throw Error(ErrorKind::OutOfDepth,
                "level " + std::to_string(level) + " exceeds depth " +
                    std::to_string(g.depth()));
  std::vector<std::uint64_t> img{0};
  for (int j = 0; j < level; ++j)
    img = next_images(g, j, img);
  return img;
}

Vertex apply(const Portrait &g, const Vertex &v) {
  if (v.level() > g.depth())
    throw Error(ErrorKind::OutOfDepth, "vertex " + v.to_string() +
                                           " lies below depth " +
                                           std::to_string(g.depth()));
  Vertex out;
  out.path.reserve(v.path.size());
  std::uint64_t index = 0;
  for (int j = 0; j < v.level(); ++j) {
    int c = v.path[static_cast<std::size_t>(j)];
    if (c < 0 || c >= g.signature().branching(j))
      throw Error(ErrorKind::Domain, "vertex child index out of range");
    out.path.push_back(g.label(j, index)(c));
    index = index * static_cast<std::uint64_t>(g.signature().branching(j)) +
            static_cast<std::uint64_t>(c);
  }
  return out;
}

int stabilizer_depth(const Portrait &g) {
  for (int j = 0; j < g.depth(); ++j)
    for (const auto &p : g.level_labels(j))
      if (!p.is_identity())
        return j;
  return g.depth();
}

std::uint64_t fixed_count(const Portrait &g, int level) {
  auto img = level_action(g, level);
  std::uint64_t n = 0;
  for (std::size_t u = 0; u < img.size(); ++u)
    n += img[u] == u;
  return n;
}

std::uint64_t nontrivial_label_count(const Portrait &g, int level) {
  std::uint64_t n = 0;
  for (const auto &p : g.level_labels(level))
    n += !p.is_identity();
  return n;
}

bool is_in_K(const Portrait &g, int n) {
  if (!g.signature().is_binary())
    throw Error(ErrorKind::Unsupported, "K_n is defined for binary trees");
  if (n < 0 || n >= g.depth())
    throw Error(ErrorKind::OutOfDepth, "K_n membership needs depth > n");
  return stabilizer_depth(g) >= n &&
         nontrivial_label_count(g, n) == g.signature().level_size(n);
}

std::vector<std::uint64_t> cycle_type(const Portrait &g, int level) {
  auto img = level_action(g, level);
  std::vector<bool> seen(img.size(), false);
  std::vector<std::uint64_t> lengths;
  for (std::size_t u = 0; u < img.size(); ++u) {
    if (seen[u])
      continue;
    std::uint64_t len = 0;
    for (auto w = u; !seen[w]; w = img[w]) {
      seen[w] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

} // namespace rinf
