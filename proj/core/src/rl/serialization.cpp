#include "probsafe/rl/serialization.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "probsafe/util/io.hpp"

namespace probsafe::rl {

namespace {

constexpr char kMagic[8] = {'P', 'S', 'A', 'F', 'E', 'P', 'O', 'L'};
constexpr std::uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little, "policy files assume a little-endian host");

void put_u32(std::string& out, std::uint32_t v) {
  char b[4];
  std::memcpy(b, &v, 4);
  out.append(b, 4);
}

void put_f64(std::string& out, double v) {
  char b[8];
  std::memcpy(b, &v, 8);
  out.append(b, 8);
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  void read(void* dst, std::size_t n, const char* what) {
    if (pos_ + n > bytes_.size()) throw PolicyFormatError(std::string("policy file truncated while reading ") + what);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32(const char* what) {
    std::uint32_t v;
    read(&v, 4, what);
    return v;
  }
  double f64(const char* what) {
    double v;
    read(&v, 8, what);
    return v;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const std::string& bytes_;
  std::size_t pos_ = 0;
};

struct Shape {
  std::uint32_t rows, cols;
};

void append_matrix(std::vector<Shape>& shapes, std::vector<const Eigen::MatrixXd*>& mats,
                   std::vector<const Eigen::VectorXd*>& vecs, const Mlp& net) {
  for (const auto& l : net.layers()) {
    shapes.push_back({static_cast<std::uint32_t>(l.weight.rows()), static_cast<std::uint32_t>(l.weight.cols())});
    mats.push_back(&l.weight);
    vecs.push_back(nullptr);
    shapes.push_back({static_cast<std::uint32_t>(l.bias.size()), 1});
    mats.push_back(nullptr);
    vecs.push_back(&l.bias);
  }
}

/// Builds an MLP from consecutive (W, b) shapes, validating the chain.
Mlp read_net(const std::vector<Shape>& shapes, std::size_t first, std::uint32_t layers, const char* name) {
  std::vector<int> sizes;
  for (std::uint32_t l = 0; l < layers; ++l) {
    const Shape w = shapes[first + 2 * l];
    const Shape b = shapes[first + 2 * l + 1];
    if (w.rows == 0 || w.cols == 0 || b.rows != w.rows || b.cols != 1) {
      throw PolicyFormatError(std::string("inconsistent layer shapes in ") + name + " network");
    }
    if (l == 0) {
      sizes.push_back(static_cast<int>(w.cols));
    } else if (static_cast<int>(w.cols) != sizes.back()) {
      throw PolicyFormatError(std::string("layer widths do not chain in ") + name + " network");
    }
    sizes.push_back(static_cast<int>(w.rows));
  }
  return Mlp(sizes);
}

void fill(Reader& r, Eigen::MatrixXd& m) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = r.f64("tensor data");
  }
}

void fill(Reader& r, Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = r.f64("tensor data");
}

}  // namespace

std::string encode_policy(const PolicyParams& params) {
  std::vector<Shape> shapes;
  std::vector<const Eigen::MatrixXd*> mats;
  std::vector<const Eigen::VectorXd*> vecs;
  append_matrix(shapes, mats, vecs, params.policy);
  shapes.push_back({static_cast<std::uint32_t>(params.log_std.size()), 1});
  mats.push_back(nullptr);
  vecs.push_back(&params.log_std);
  append_matrix(shapes, mats, vecs, params.value);

  std::string out(kMagic, sizeof kMagic);
  put_u32(out, kVersion);
  put_u32(out, static_cast<std::uint32_t>(params.policy.layers().size()));
  put_u32(out, static_cast<std::uint32_t>(params.value.layers().size()));
  put_u32(out, static_cast<std::uint32_t>(shapes.size()));
  for (const auto& s : shapes) {
    put_u32(out, s.rows);
    put_u32(out, s.cols);
  }
  for (std::size_t t = 0; t < shapes.size(); ++t) {
    if (mats[t] != nullptr) {
      for (Eigen::Index i = 0; i < mats[t]->rows(); ++i) {
        for (Eigen::Index j = 0; j < mats[t]->cols(); ++j) put_f64(out, (*mats[t])(i, j));
      }
    } else {
      for (const double v : *vecs[t]) put_f64(out, v);
    }
  }
  return out;
}

PolicyParams decode_policy(const std::string& bytes) {
  Reader r(bytes);
  char magic[8];
  r.read(magic, sizeof magic, "magic");
  if (std::memcmp(magic, kMagic, sizeof magic) != 0) throw PolicyFormatError("not a policy file (bad magic)");
  const std::uint32_t version = r.u32("version");
  if (version != kVersion) throw PolicyFormatError("unsupported policy file version " + std::to_string(version));
  const std::uint32_t p = r.u32("policy layer count");
  const std::uint32_t v = r.u32("value layer count");
  const std::uint32_t t = r.u32("tensor count");
  if (p == 0 || v == 0 || p > 64 || v > 64 || t != 2 * p + 1 + 2 * v) {
    throw PolicyFormatError("inconsistent tensor counts in policy file");
  }
  std::vector<Shape> shapes(t);
  std::uint64_t elements = 0;
  for (auto& s : shapes) {
    s.rows = r.u32("tensor shape");
    s.cols = r.u32("tensor shape");
    elements += static_cast<std::uint64_t>(s.rows) * s.cols;
  }
  if (r.remaining() != elements * 8) throw PolicyFormatError("policy file size does not match its header");

  PolicyParams params;
  params.policy = read_net(shapes, 0, p, "policy");
  const Shape ls = shapes[2 * p];
  if (ls.cols != 1 || static_cast<int>(ls.rows) != params.policy.output_size()) {
    throw PolicyFormatError("log_std shape does not match the policy head");
  }
  params.value = read_net(shapes, 2 * p + 1, v, "value");
  if (params.value.output_size() != 1 || params.value.input_size() != params.policy.input_size()) {
    throw PolicyFormatError("value network shape does not match the policy network");
  }
  params.log_std.resize(ls.rows);
  for (auto& l : params.policy.layers()) {
    fill(r, l.weight);
    fill(r, l.bias);
  }
  fill(r, params.log_std);
  for (auto& l : params.value.layers()) {
    fill(r, l.weight);
    fill(r, l.bias);
  }
  if (!params.all_finite()) throw PolicyFormatError("policy file contains non-finite weights");
  return params;
}

void save_policy(const PolicyParams& params, const std::filesystem::path& path) {
  util::write_text_file(path, encode_policy(params));
}

PolicyParams load_policy(const std::filesystem::path& path) {
  std::string bytes;
  try {
    bytes = util::read_text_file(path);
  } catch (const std::exception& e) {
    throw PolicyFormatError(std::string("cannot read policy file: ") + e.what());
  }
  try {
    return decode_policy(bytes);
  } catch (const PolicyFormatError& e) {
    throw PolicyFormatError(path.string() + ": " + e.what());
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& policy_path) {
  std::filesystem::path p = policy_path;
  p += ".json";
  return p;
}

}  // namespace probsafe::rl
