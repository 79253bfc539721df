// Copyright 2026 The icsroute Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <charconv>
#include <cmath>
#include <string>

#include "core/formulation.h"

namespace icsroute {

namespace {

constexpr size_t kFlushBytes = 1 << 20;
constexpr int kTermsPerLine = 8;
constexpr int kSignificantDigits = 15;

class LpWriter {
 public:
  explicit LpWriter(std::ostream& sink) : sink_(sink) { buf_.reserve(2 * kFlushBytes); }

  std::string& buf() { return buf_; }

  void MaybeFlush() {
    if (buf_.size() >= kFlushBytes) Flush();
  }
  void Flush() {
    sink_.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
    buf_.clear();
    if (!sink_) throw Error(ErrorCode::kIo, "LP sink write failed");
  }

  void Double(double v) {
    char tmp[64];
    auto res = std::to_chars(tmp, tmp + sizeof(tmp), v, std::chars_format::general,
                             kSignificantDigits);
    buf_.append(tmp, res.ptr);
  }
  void Int(std::int64_t v) {
    char tmp[24];
    auto res = std::to_chars(tmp, tmp + sizeof(tmp), v);
    buf_.append(tmp, res.ptr);
  }

 private:
  std::ostream& sink_;
  std::string buf_;
};

// Objective coefficient as a double, computed from integers so that no
// rational arithmetic is needed per variable.
double Coefficient(const IlpModel& m, std::int64_t var) {
  const Instance& inst = m.instance();
  const std::int64_t per_block = m.num_edges();
  const std::int64_t critical = static_cast<std::int64_t>(m.num_streams()) * per_block;
  const bool replica = var >= critical;
  const std::int64_t rel = replica ? var - critical : var;
  const std::int64_t block = rel / per_block;
  const auto e = static_cast<EdgeId>(rel % per_block);
  const auto stream = static_cast<int>(replica ? block / m.num_ids() : block);
  const CriticalStream& s = inst.critical[stream];
  const Bps cap = inst.CriticalCapacity(e);
  __int128 num = -static_cast<__int128>(s.demand);
  if (replica) {
    const VertexId d = m.ids_set()[static_cast<int>(block % m.num_ids())];
    if (inst.topology.edge(e).to == d) {
      num += static_cast<__int128>(m.k()) * s.relevance * cap;
    }
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(cap));
}

}  // namespace

void ExportLp(const IlpModel& model, std::ostream& sink) {
  LpWriter w(sink);
  std::string& buf = w.buf();
  buf += "\\ Critical stream routing with IDS replicas\n";
  buf += "\\ streams=";
  w.Int(model.num_streams());
  buf += " directed_edges=";
  w.Int(model.num_edges());
  buf += " ids=";
  w.Int(model.num_ids());
  buf += " K=";
  w.Int(model.k());
  buf += "\nMaximize\n obj:";

  int on_line = 0;
  auto line_break = [&] {
    if (++on_line == kTermsPerLine) {
      buf += "\n     ";
      on_line = 0;
      w.MaybeFlush();
    }
  };
  const std::int64_t n = model.num_variables();
  for (std::int64_t v = 0; v < n; ++v) {
    const double c = Coefficient(model, v);
    if (c == 0.0) continue;
    buf += c < 0 ? " - " : " + ";
    w.Double(std::fabs(c));
    buf += ' ';
    model.AppendVariableName(v, buf);
    line_break();
  }
  const std::int64_t constant = static_cast<std::int64_t>(model.num_streams()) * model.num_edges();
  if (n == 0 || constant != 0) {
    buf += " + ";
    w.Int(constant);
  }
  buf += "\nSubject To\n";

  model.ForEachRow([&](const Row& row) {
    buf += ' ';
    buf += row.name;
    buf += ':';
    on_line = 0;
    for (const LinearTerm& t : row.terms) {
      buf += t.coeff < 0 ? " - " : " + ";
      const std::int64_t mag = t.coeff < 0 ? -t.coeff : t.coeff;
      if (mag != 1) {
        w.Int(mag);
        buf += ' ';
      }
      model.AppendVariableName(t.var, buf);
      line_break();
    }
    switch (row.sense) {
      case Sense::kLessEqual: buf += " <= "; break;
      case Sense::kGreaterEqual: buf += " >= "; break;
      case Sense::kEqual: buf += " = "; break;
    }
    w.Int(row.rhs);
    buf += '\n';
    w.MaybeFlush();
  });

  buf += "Binary\n";
  for (std::int64_t v = 0; v < n; ++v) {
    buf += ' ';
    model.AppendVariableName(v, buf);
    buf += '\n';
    w.MaybeFlush();
  }
  buf += "End\n";
  w.Flush();
}

}  // namespace icsroute
