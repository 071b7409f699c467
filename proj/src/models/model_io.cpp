/*
 * Copyright 2026 The RecipeForge Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "recipeforge/models/model_io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "recipeforge/error.hpp"

namespace recipeforge {
namespace {

constexpr char kMagic[8] = {'R', 'F', 'M', 'O', 'D', 'E', 'L', '\0'};

class BinaryWriter {
 public:
  explicit BinaryWriter(std::ostream& out) : out_(out) {}

  void U32(std::uint32_t v) { Bytes(v, 4); }
  void U64(std::uint64_t v) { Bytes(v, 8); }
  void I64(std::int64_t v) { U64(static_cast<std::uint64_t>(v)); }
  void F64(double v) { U64(std::bit_cast<std::uint64_t>(v)); }
  void F64s(const double* v, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) F64(v[k]);
  }

 private:
  void Bytes(std::uint64_t v, int n) {
    char buf[8];
    for (int k = 0; k < n; ++k) buf[k] = static_cast<char>((v >> (8 * k)) & 0xff);
    out_.write(buf, n);
  }
  std::ostream& out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(std::istream& in) : in_(in) {}

  std::uint32_t U32() { return static_cast<std::uint32_t>(Bytes(4)); }
  std::uint64_t U64() { return Bytes(8); }
  std::int64_t I64() { return static_cast<std::int64_t>(U64()); }
  double F64() { return std::bit_cast<double>(U64()); }
  std::vector<double> F64s(std::size_t n) {
    std::vector<double> v(n);
    for (double& x : v) x = F64();
    return v;
  }
  // Guards allocations against corrupt size fields.
  std::uint64_t Count(std::uint64_t limit) {
    const std::uint64_t n = U64();
    if (n > limit) Fail(ErrorKind::kFormat, "model file declares an implausible size");
    return n;
  }

 private:
  std::uint64_t Bytes(int n) {
    unsigned char buf[8];
    in_.read(reinterpret_cast<char*>(buf), n);
    if (in_.gcount() != n) Fail(ErrorKind::kFormat, "truncated model file");
    std::uint64_t v = 0;
    for (int k = 0; k < n; ++k) v |= static_cast<std::uint64_t>(buf[k]) << (8 * k);
    return v;
  }
  std::istream& in_;
};

constexpr std::uint64_t kMaxCount = 1ULL << 32;

}  // namespace

std::string_view ModelKindName(ModelKind kind) {
  switch (kind) {
    case ModelKind::kNaiveBayes: return "nb";
    case ModelKind::kLogReg: return "logreg";
    case ModelKind::kSvm: return "svm";
    case ModelKind::kMlp: return "mlp";
    case ModelKind::kForest: return "forest";
  }
  return "nb";
}

std::optional<ModelKind> ModelKindFromName(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (key == "nb" || key == "naive-bayes" || key == "naivebayes") return ModelKind::kNaiveBayes;
  if (key == "logreg" || key == "logistic" || key == "lr") return ModelKind::kLogReg;
  if (key == "svm" || key == "linear-svm") return ModelKind::kSvm;
  if (key == "mlp" || key == "neural") return ModelKind::kMlp;
  if (key == "forest" || key == "rf" || key == "random-forest") return ModelKind::kForest;
  return std::nullopt;
}

ModelKind KindOf(const AnyModel& model) {
  switch (model.index()) {
    case 0: return ModelKind::kNaiveBayes;
    case 1:
      return std::get<LinearModel>(model).kind() == LinearKind::kSoftmaxRegression
                 ? ModelKind::kLogReg
                 : ModelKind::kSvm;
    case 2: return ModelKind::kMlp;
    default: return ModelKind::kForest;
  }
}

std::size_t InputDim(const AnyModel& model) {
  return std::visit(
      [](const auto& m) -> std::size_t {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) return m.vocab_size();
        else if constexpr (std::is_same_v<T, MlpModel>) return m.shape().vocab_size;
        else return m.dim();
      },
      model);
}

void WriteModel(const AnyModel& model, std::ostream& out) {
  BinaryWriter w(out);
  out.write(kMagic, sizeof(kMagic));
  w.U32(kModelFormatVersion);
  w.U32(static_cast<std::uint32_t>(KindOf(model)));
  w.U64(InputDim(model));
  w.U64(kGenreCount);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          w.F64(m.alpha());
          w.F64s(m.log_prior().data(), kGenreCount);
          w.F64s(m.log_likelihood().data(), m.log_likelihood().size());
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          w.F64s(m.weights().data(), m.weights().size());
          w.F64s(m.bias().data(), kGenreCount);
          if (m.kind() == LinearKind::kOvrHinge) {
            w.F64s(m.platt_a().data(), kGenreCount);
            w.F64s(m.platt_b().data(), kGenreCount);
          }
        } else if constexpr (std::is_same_v<T, MlpModel>) {
          w.U64(m.shape().embedding_dim);
          w.U64(m.shape().hidden.size());
          for (std::size_t h : m.shape().hidden) w.U64(h);
          w.F64s(m.parameters().data(), m.parameters().size());
        } else {
          w.U64(m.trees().size());
          for (const DecisionTree& tree : m.trees()) {
            w.U64(tree.nodes.size());
            for (const TreeNode& n : tree.nodes) {
              w.I64(n.feature);
              w.F64(n.threshold);
              w.I64(n.left);
              w.I64(n.right);
              w.F64s(n.histogram.data(), kGenreCount);
            }
          }
        }
      },
      model);
  if (!out) Fail(ErrorKind::kIo, "failed writing model");
}

AnyModel ReadModel(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (in.gcount() != sizeof(magic) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    Fail(ErrorKind::kFormat, "not a model file (bad magic)");
  }
  BinaryReader r(in);
  const std::uint32_t version = r.U32();
  if (version != kModelFormatVersion) {
    Fail(ErrorKind::kFormat, "unsupported model format version " + std::to_string(version));
  }
  const auto kind = static_cast<ModelKind>(r.U32());
  const std::uint64_t dim = r.Count(kMaxCount);
  if (r.U64() != kGenreCount) Fail(ErrorKind::kFormat, "model genre count is not 9");
  switch (kind) {
    case ModelKind::kNaiveBayes: {
      const double alpha = r.F64();
      std::array<double, kGenreCount> prior{};
      for (double& p : prior) p = r.F64();
      return NaiveBayesModel::FromParameters(alpha, dim, prior, r.F64s(kGenreCount * dim));
    }
    case ModelKind::kLogReg:
    case ModelKind::kSvm: {
      LinearModel m(kind == ModelKind::kLogReg ? LinearKind::kSoftmaxRegression
                                               : LinearKind::kOvrHinge,
                    dim);
      m.weights() = r.F64s(kGenreCount * dim);
      for (double& b : m.bias()) b = r.F64();
      if (kind == ModelKind::kSvm) {
        for (double& v : m.platt_a()) v = r.F64();
        for (double& v : m.platt_b()) v = r.F64();
      }
      return m;
    }
    case ModelKind::kMlp: {
      MlpShape shape;
      shape.vocab_size = dim;
      shape.embedding_dim = r.Count(1 << 20);
      shape.hidden.resize(r.Count(64));
      for (std::size_t& h : shape.hidden) h = r.Count(1 << 20);
      MlpModel m(shape);
      m.parameters() = r.F64s(m.parameters().size());
      return m;
    }
    case ModelKind::kForest: {
      std::vector<DecisionTree> trees(r.Count(1 << 20));
      for (DecisionTree& tree : trees) {
        tree.nodes.resize(r.Count(kMaxCount));
        for (TreeNode& n : tree.nodes) {
          n.feature = r.I64();
          n.threshold = r.F64();
          n.left = r.I64();
          n.right = r.I64();
          for (double& h : n.histogram) h = r.F64();
          const auto size = static_cast<std::int64_t>(tree.nodes.size());
          if (n.feature >= 0 && (n.left < 0 || n.left >= size || n.right < 0 || n.right >= size ||
                                 static_cast<std::uint64_t>(n.feature) >= dim)) {
            Fail(ErrorKind::kFormat, "corrupt tree node in model file");
          }
        }
      }
      return ForestModel(dim, std::move(trees));
    }
  }
  Fail(ErrorKind::kFormat, "unknown model kind " + std::to_string(static_cast<int>(kind)));
}

void SaveModel(const AnyModel& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorKind::kIo, "cannot write " + path.string());
  WriteModel(model, out);
}

AnyModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorKind::kIo, "cannot open " + path.string());
  return ReadModel(in);
}

std::string ModelSummary(const AnyModel& model) {
  std::ostringstream s;
  s << std::setprecision(6);
  s << "kind: " << ModelKindName(KindOf(model)) << "\n";
  s << "format_version: " << kModelFormatVersion << "\n";
  s << "vocabulary_size: " << InputDim(model) << "\n";
  s << "genres: " << kGenreCount << "\n";
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, NaiveBayesModel>) {
          s << "alpha: " << m.alpha() << "\n";
          s << "log_prior:";
          for (double p : m.log_prior()) s << ' ' << p;
          s << "\n";
        } else if constexpr (std::is_same_v<T, LinearModel>) {
          double norm = 0.0;
          for (double v : m.weights()) norm += v * v;
          s << "objective: "
            << (m.kind() == LinearKind::kSoftmaxRegression ? "softmax cross-entropy"
                                                           : "one-vs-rest hinge")
            << "\n";
          s << "weight_l2_norm: " << std::sqrt(norm) << "\n";
          if (m.kind() == LinearKind::kOvrHinge) {
            s << "platt_a:";
            for (double v : m.platt_a()) s << ' ' << v;
            s << "\nplatt_b:";
            for (double v : m.platt_b()) s << ' ' << v;
            s << "\n";
          }
        } else if constexpr (std::is_same_v<T, MlpModel>) {
          s << "embedding_dim: " << m.shape().embedding_dim << "\n";
          s << "hidden:";
          for (std::size_t h : m.shape().hidden) s << ' ' << h;
          s << "\nparameters: " << m.parameters().size() << "\n";
        } else {
          std::size_t nodes = 0;
          std::size_t depth = 0;
          for (const auto& t : m.trees()) {
            nodes += t.nodes.size();
            depth = std::max(depth, t.Depth());
          }
          s << "trees: " << m.trees().size() << "\nnodes: " << nodes << "\nmax_depth: " << depth
            << "\n";
        }
      },
      model);
  return s.str();
}

}  // namespace recipeforge
