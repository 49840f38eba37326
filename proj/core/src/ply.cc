/* Copyright 2026 The gsedit Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "gsedit/ply.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "gsedit/status.h"
#include "string_compat.h"

namespace gsedit {
namespace {

static_assert(std::endian::native == std::endian::little,
              "binary PLY decoding assumes a little-endian host");

enum class ScalarType { kI8, kU8, kI16, kU16, kI32, kU32, kF32, kF64 };

std::optional<ScalarType> ParseType(std::string_view name) {
  static const std::map<std::string_view, ScalarType> kTypes = {
      {"char", ScalarType::kI8},    {"int8", ScalarType::kI8},
      {"uchar", ScalarType::kU8},   {"uint8", ScalarType::kU8},
      {"short", ScalarType::kI16},  {"int16", ScalarType::kI16},
      {"ushort", ScalarType::kU16}, {"uint16", ScalarType::kU16},
      {"int", ScalarType::kI32},    {"int32", ScalarType::kI32},
      {"uint", ScalarType::kU32},   {"uint32", ScalarType::kU32},
      {"float", ScalarType::kF32},  {"float32", ScalarType::kF32},
      {"double", ScalarType::kF64}, {"float64", ScalarType::kF64},
  };
  auto it = kTypes.find(name);
  if (it == kTypes.end()) return std::nullopt;
  return it->second;
}

size_t TypeSize(ScalarType t) {
  switch (t) {
    case ScalarType::kI8:
    case ScalarType::kU8:
      return 1;
    case ScalarType::kI16:
    case ScalarType::kU16:
      return 2;
    case ScalarType::kI32:
    case ScalarType::kU32:
    case ScalarType::kF32:
      return 4;
    case ScalarType::kF64:
      return 8;
  }
  return 0;
}

bool IsFloat(ScalarType t) {
  return t == ScalarType::kF32 || t == ScalarType::kF64;
}

template <typename T>
T LoadRaw(const char* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

double DecodeBinary(ScalarType t, const char* p) {
  switch (t) {
    case ScalarType::kI8:
      return LoadRaw<int8_t>(p);
    case ScalarType::kU8:
      return LoadRaw<uint8_t>(p);
    case ScalarType::kI16:
      return LoadRaw<int16_t>(p);
    case ScalarType::kU16:
      return LoadRaw<uint16_t>(p);
    case ScalarType::kI32:
      return LoadRaw<int32_t>(p);
    case ScalarType::kU32:
      return LoadRaw<uint32_t>(p);
    case ScalarType::kF32:
      return LoadRaw<float>(p);
    case ScalarType::kF64:
      return LoadRaw<double>(p);
  }
  return 0.0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::kF32;
  bool is_list = false;
  ScalarType count_type = ScalarType::kU8;
};

struct Element {
  std::string name;
  size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool binary = false;
  std::vector<Element> elements;
  std::optional<PlyConvention> declared_convention;
  size_t body_offset = 0;
};

absl::Status Malformed(std::string_view why) {
  return MakeError(ErrorCode::kMalformedPly, why);
}

absl::StatusOr<Header> ParseHeader(std::string_view bytes) {
  Header header;
  size_t pos = 0;
  bool saw_magic = false;
  bool saw_format = false;
  while (true) {
    const size_t eol = bytes.find('\n', pos);
    if (eol == std::string_view::npos) return Malformed("missing end_header");
    std::string_view line = bytes.substr(pos, eol - pos);
    pos = eol + 1;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<absl::string_view> tok =
        absl::StrSplit(Sv(line), ' ', absl::SkipEmpty());
    if (!saw_magic) {
      if (line != "ply") return Malformed("missing 'ply' magic");
      saw_magic = true;
      continue;
    }
    if (tok.empty()) continue;
    if (tok[0] == "format") {
      if (tok.size() < 3) return Malformed("bad format line");
      if (tok[1] == "ascii") {
        header.binary = false;
      } else if (tok[1] == "binary_little_endian") {
        header.binary = true;
      } else {
        return Malformed(absl::StrCat("unsupported format '", tok[1], "'"));
      }
      saw_format = true;
    } else if (tok[0] == "comment" || tok[0] == "obj_info") {
      if (tok.size() >= 3 && absl::AsciiStrToLower(tok[1]) == "convention") {
        const std::string value = absl::AsciiStrToLower(tok[2]);
        if (value == "linear") header.declared_convention = PlyConvention::kLinear;
        if (value == "splat") header.declared_convention = PlyConvention::kSplat;
      }
    } else if (tok[0] == "element") {
      if (tok.size() != 3) return Malformed("bad element line");
      Element e;
      e.name = std::string(tok[1]);
      if (!absl::SimpleAtoi(tok[2], &e.count)) {
        return Malformed("bad element count");
      }
      header.elements.push_back(std::move(e));
    } else if (tok[0] == "property") {
      if (header.elements.empty()) return Malformed("property before element");
      Property p;
      if (tok.size() == 5 && tok[1] == "list") {
        auto ct = ParseType(StdSv(tok[2]));
        auto it = ParseType(StdSv(tok[3]));
        if (!ct || !it) return Malformed("bad list property type");
        p.is_list = true;
        p.count_type = *ct;
        p.type = *it;
        p.name = std::string(tok[4]);
      } else if (tok.size() == 3) {
        auto t = ParseType(StdSv(tok[1]));
        if (!t) return Malformed(absl::StrCat("unknown type '", tok[1], "'"));
        p.type = *t;
        p.name = std::string(tok[2]);
      } else {
        return Malformed("bad property line");
      }
      header.elements.back().properties.push_back(std::move(p));
    } else if (tok[0] == "end_header") {
      break;
    } else {
      return Malformed(absl::StrCat("unexpected header keyword '", tok[0], "'"));
    }
  }
  if (!saw_format) return Malformed("missing format line");
  header.body_offset = pos;
  return header;
}

// Sequential reader over the body, ascii or binary.
class BodyReader {
 public:
  BodyReader(std::string_view body, bool binary) : body_(body), binary_(binary) {}

  absl::StatusOr<double> Next(ScalarType t) {
    if (binary_) {
      const size_t n = TypeSize(t);
      if (pos_ + n > body_.size()) return Malformed("truncated binary body");
      const double v = DecodeBinary(t, body_.data() + pos_);
      pos_ += n;
      return v;
    }
    while (pos_ < body_.size() && absl::ascii_isspace(body_[pos_])) ++pos_;
    if (pos_ >= body_.size()) return Malformed("truncated ascii body");
    size_t end = pos_;
    while (end < body_.size() && !absl::ascii_isspace(body_[end])) ++end;
    std::string_view token = body_.substr(pos_, end - pos_);
    pos_ = end;
    double v = 0.0;
    if (token == "nan" || token == "-nan" || token == "NaN") {
      return std::nan("");
    }
    if (token == "inf" || token == "-inf") {
      return token[0] == '-' ? -HUGE_VAL : HUGE_VAL;
    }
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      return Malformed(absl::StrCat("bad ascii value '", Sv(token), "'"));
    }
    return v;
  }

  absl::Status Skip(const Property& p) {
    if (!p.is_list) return Next(p.type).status();
    GSEDIT_ASSIGN_OR_RETURN(double count, Next(p.count_type));
    if (count < 0 || count != std::floor(count)) return Malformed("bad list count");
    for (int64_t i = 0; i < static_cast<int64_t>(count); ++i) {
      GSEDIT_RETURN_IF_ERROR(Next(p.type).status());
    }
    return absl::OkStatus();
  }

 private:
  std::string_view body_;
  bool binary_;
  size_t pos_ = 0;
};

double Sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

absl::StatusOr<PlyConvention> ParsePlyConvention(std::string_view name) {
  const std::string lower = absl::AsciiStrToLower(Sv(name));
  if (lower == "auto") return PlyConvention::kAuto;
  if (lower == "linear") return PlyConvention::kLinear;
  if (lower == "splat") return PlyConvention::kSplat;
  return MakeError(ErrorCode::kInvalidArgument,
                   absl::StrCat("unknown PLY convention '", Sv(name),
                                "' (expected auto, linear or splat)"));
}

absl::StatusOr<GaussianCloud> LoadAsset(std::string_view bytes,
                                        PlyConvention convention) {
  GSEDIT_ASSIGN_OR_RETURN(Header header, ParseHeader(bytes));
  BodyReader reader(bytes.substr(header.body_offset), header.binary);

  const Element* vertex = nullptr;
  for (const Element& e : header.elements) {
    if (e.name == "vertex") {
      vertex = &e;
      break;
    }
    // Elements ahead of the vertex block must be consumed.
    for (size_t i = 0; i < e.count; ++i) {
      for (const Property& p : e.properties) GSEDIT_RETURN_IF_ERROR(reader.Skip(p));
    }
  }
  if (vertex == nullptr) return Malformed("no vertex element");

  std::map<std::string, size_t> column;
  for (size_t i = 0; i < vertex->properties.size(); ++i) {
    if (vertex->properties[i].is_list) {
      return Malformed("list properties are not allowed on vertices");
    }
    column[vertex->properties[i].name] = i;
  }
  auto require = [&](std::string_view name) -> absl::StatusOr<size_t> {
    auto it = column.find(std::string(name));
    if (it == column.end()) {
      return Malformed(absl::StrCat("missing vertex property '", Sv(name), "'"));
    }
    return it->second;
  };

  std::array<size_t, 3> pos_col, scale_col, color_col;
  std::array<size_t, 4> rot_col;
  for (int i = 0; i < 3; ++i) {
    GSEDIT_ASSIGN_OR_RETURN(pos_col[i], require(std::string(1, "xyz"[i])));
    GSEDIT_ASSIGN_OR_RETURN(scale_col[i], require(absl::StrCat("scale_", i)));
  }
  for (int i = 0; i < 4; ++i) {
    GSEDIT_ASSIGN_OR_RETURN(rot_col[i], require(absl::StrCat("rot_", i)));
  }
  GSEDIT_ASSIGN_OR_RETURN(const size_t opacity_col, require("opacity"));

  const bool has_sh = column.contains("f_dc_0");
  bool color_is_byte = false;
  for (int i = 0; i < 3; ++i) {
    if (has_sh) {
      GSEDIT_ASSIGN_OR_RETURN(color_col[i], require(absl::StrCat("f_dc_", i)));
    } else {
      static constexpr const char* kRgb[] = {"red", "green", "blue"};
      GSEDIT_ASSIGN_OR_RETURN(color_col[i], require(kRgb[i]));
      color_is_byte = !IsFloat(vertex->properties[color_col[i]].type);
    }
  }

  PlyConvention effective = convention;
  if (effective == PlyConvention::kAuto) {
    if (header.declared_convention.has_value()) {
      effective = *header.declared_convention;
    } else if (has_sh && IsFloat(vertex->properties[scale_col[0]].type)) {
      effective = PlyConvention::kSplat;
    } else {
      effective = PlyConvention::kLinear;
    }
  }
  const bool splat = effective == PlyConvention::kSplat;

  GaussianCloud cloud;
  cloud.frame = CoordinateFrame::kLocal;
  cloud.gaussians.reserve(vertex->count);
  std::vector<double> row(vertex->properties.size());
  for (size_t v = 0; v < vertex->count; ++v) {
    for (size_t i = 0; i < row.size(); ++i) {
      GSEDIT_ASSIGN_OR_RETURN(row[i], reader.Next(vertex->properties[i].type));
    }
    for (double value : row) {
      if (!std::isfinite(value)) {
        return MakeError(ErrorCode::kNonFiniteValue,
                         absl::StrCat("vertex ", v, " has a non-finite value"));
      }
    }
    Gaussian3D g;
    g.mean = Vec3(row[pos_col[0]], row[pos_col[1]], row[pos_col[2]]);
    for (int i = 0; i < 3; ++i) {
      const double s = row[scale_col[i]];
      g.scale[i] = splat ? std::exp(s) : s;
    }
    if (!(g.scale.array() > 0.0).all() || !g.scale.allFinite()) {
      return MakeError(ErrorCode::kDegenerateGaussian,
                       absl::StrCat("vertex ", v, " has non-positive scale"));
    }
    const double raw_opacity = row[opacity_col];
    g.opacity = splat ? Sigmoid(raw_opacity) : raw_opacity;
    if (!(g.opacity > 0.0 && g.opacity <= 1.0)) {
      return MakeError(ErrorCode::kDegenerateGaussian,
                       absl::StrCat("vertex ", v, " has opacity ", g.opacity,
                                    " outside (0, 1]"));
    }
    for (int i = 0; i < 3; ++i) {
      const double raw = row[color_col[i]];
      double c = has_sh ? 0.5 + kShC0 * raw : (color_is_byte ? raw / 255.0 : raw);
      g.color[i] = std::clamp(c, 0.0, 1.0);
    }
    const Eigen::Vector4d q(row[rot_col[0]], row[rot_col[1]], row[rot_col[2]],
                            row[rot_col[3]]);
    if (splat) {
      // Trainer exports store unnormalized quaternions.
      const double n = q.norm();
      if (!(n > 1e-12)) {
        return MakeError(ErrorCode::kDegenerateGaussian,
                         absl::StrCat("vertex ", v, " has a zero quaternion"));
      }
      g.rotation = Eigen::Quaterniond(q[0] / n, q[1] / n, q[2] / n, q[3] / n);
    } else {
      auto normalized = NormalizedQuaternion(q);
      if (!normalized.ok()) {
        return MakeError(ErrorCode::kMalformedPly,
                         absl::StrCat("vertex ", v, ": ",
                                      normalized.status().message()));
      }
      g.rotation = *normalized;
    }
    cloud.gaussians.push_back(g);
  }
  return cloud;
}

absl::StatusOr<GaussianCloud> LoadAssetFile(const std::string& path,
                                            PlyConvention convention) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorCode::kIoError, absl::StrCat("cannot open ", path));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return LoadAsset(ss.str(), convention);
}

std::string EncodeAsset(const GaussianCloud& cloud, PlyConvention convention,
                        PlyEncoding encoding) {
  const bool splat = convention == PlyConvention::kSplat;
  std::ostringstream out;
  out << "ply\n";
  out << (encoding == PlyEncoding::kAscii ? "format ascii 1.0\n"
                                          : "format binary_little_endian 1.0\n");
  out << "comment convention " << (splat ? "splat" : "linear") << "\n";
  out << "element vertex " << cloud.size() << "\n";
  std::vector<std::string> names = {"x", "y", "z"};
  if (splat) {
    names.insert(names.end(), {"f_dc_0", "f_dc_1", "f_dc_2"});
  } else {
    names.insert(names.end(), {"red", "green", "blue"});
  }
  names.insert(names.end(), {"opacity", "scale_0", "scale_1", "scale_2", "rot_0",
                             "rot_1", "rot_2", "rot_3"});
  for (const std::string& n : names) out << "property float " << n << "\n";
  out << "end_header\n";

  std::vector<float> row(names.size());
  for (const Gaussian3D& g : cloud.gaussians) {
    size_t k = 0;
    for (int i = 0; i < 3; ++i) row[k++] = static_cast<float>(g.mean[i]);
    for (int i = 0; i < 3; ++i) {
      row[k++] = static_cast<float>(splat ? (g.color[i] - 0.5) / kShC0 : g.color[i]);
    }
    if (splat) {
      const double o = std::min(g.opacity, 1.0 - 1e-7);
      row[k++] = static_cast<float>(std::log(o / (1.0 - o)));
    } else {
      row[k++] = static_cast<float>(g.opacity);
    }
    for (int i = 0; i < 3; ++i) {
      row[k++] = static_cast<float>(splat ? std::log(g.scale[i]) : g.scale[i]);
    }
    row[k++] = static_cast<float>(g.rotation.w());
    row[k++] = static_cast<float>(g.rotation.x());
    row[k++] = static_cast<float>(g.rotation.y());
    row[k++] = static_cast<float>(g.rotation.z());
    if (encoding == PlyEncoding::kAscii) {
      for (size_t i = 0; i < row.size(); ++i) {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), row[i]);
        out << (i ? " " : "") << std::string_view(buf, res.ptr - buf);
      }
      out << "\n";
    } else {
      out.write(reinterpret_cast<const char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
  }
  return out.str();
}

}  // namespace gsedit
