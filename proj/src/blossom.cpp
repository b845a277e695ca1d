// Maximum-weight general matching by Edmonds' blossom algorithm with dual
// variables, O(n^3). Follows the classic formulation of Galil's survey; the
// state layout mirrors the widely used reference implementation by
// J. van Rantwijk (endpoint/labelend/bestedge arrays).
#include <algorithm>
#include <cassert>
#include <tuple>

#include "ssqec/matching.hpp"

namespace ssqec {

namespace {

class Blossom {
 public:
  Blossom(std::size_t n, const std::vector<std::tuple<std::size_t, std::size_t, MatchingWeight>>& edges, bool maxcard)
      : nv_(static_cast<long>(n)), ne_(static_cast<long>(edges.size())), maxcard_(maxcard) {
    ei_.resize(edges.size());
    ej_.resize(edges.size());
    ew_.resize(edges.size());
    MatchingWeight maxw = 0;
    for (std::size_t k = 0; k < edges.size(); ++k) {
      ei_[k] = static_cast<long>(std::get<0>(edges[k]));
      ej_[k] = static_cast<long>(std::get<1>(edges[k]));
      // Doubling keeps every slack even so all dual updates stay integral.
      ew_[k] = 2 * std::get<2>(edges[k]);
      maxw = std::max(maxw, ew_[k]);
    }
    endpoint_.resize(2 * edges.size());
    for (long p = 0; p < 2 * ne_; ++p) endpoint_[p] = (p % 2 == 0) ? ei_[p / 2] : ej_[p / 2];
    neighbend_.assign(n, {});
    for (long k = 0; k < ne_; ++k) {
      neighbend_[ei_[k]].push_back(2 * k + 1);
      neighbend_[ej_[k]].push_back(2 * k);
    }
    mate_.assign(n, -1);
    label_.assign(2 * n, 0);
    labelend_.assign(2 * n, -1);
    inblossom_.resize(n);
    for (long i = 0; i < nv_; ++i) inblossom_[i] = i;
    blossomparent_.assign(2 * n, -1);
    blossomchilds_.assign(2 * n, {});
    blossombase_.assign(2 * n, -1);
    for (long i = 0; i < nv_; ++i) blossombase_[i] = i;
    blossomendps_.assign(2 * n, {});
    bestedge_.assign(2 * n, -1);
    blossombestedges_.assign(2 * n, {});
    has_bestedges_.assign(2 * n, false);
    for (long b = 2 * nv_ - 1; b >= nv_; --b) unused_.push_back(b);
    dualvar_.assign(2 * n, 0);
    for (long i = 0; i < nv_; ++i) dualvar_[i] = maxw;
    allowedge_.assign(edges.size(), false);
  }

  std::vector<long> run() {
    for (long t = 0; t < nv_; ++t) {
      std::fill(label_.begin(), label_.end(), 0);
      std::fill(bestedge_.begin(), bestedge_.end(), -1);
      for (long b = nv_; b < 2 * nv_; ++b) {
        blossombestedges_[b].clear();
        has_bestedges_[b] = false;
      }
      std::fill(allowedge_.begin(), allowedge_.end(), false);
      queue_.clear();
      for (long v = 0; v < nv_; ++v) {
        if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);
      }
      bool augmented = false;
      while (true) {
        while (!queue_.empty() && !augmented) {
          const long v = queue_.back();
          queue_.pop_back();
          for (long p : neighbend_[v]) {
            const long k = p / 2;
            const long w = endpoint_[p];
            if (inblossom_[v] == inblossom_[w]) continue;
            MatchingWeight kslack = 0;
            if (!allowedge_[k]) {
              kslack = slack(k);
              if (kslack <= 0) allowedge_[k] = true;
            }
            if (allowedge_[k]) {
              if (label_[inblossom_[w]] == 0) {
                assign_label(w, 2, p ^ 1);
              } else if (label_[inblossom_[w]] == 1) {
                const long base = scan_blossom(v, w);
                if (base >= 0) {
                  add_blossom(base, k);
                } else {
                  augment_matching(k);
                  augmented = true;
                  break;
                }
              } else if (label_[w] == 0) {
                label_[w] = 2;
                labelend_[w] = p ^ 1;
              }
            } else if (label_[inblossom_[w]] == 1) {
              const long b = inblossom_[v];
              if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
            } else if (label_[w] == 0) {
              if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
            }
          }
        }
        if (augmented) break;

        int deltatype = -1;
        MatchingWeight delta = 0;
        long deltaedge = -1, deltablossom = -1;
        if (!maxcard_) {
          deltatype = 1;
          delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_);
        }
        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
            const MatchingWeight d = slack(bestedge_[v]);
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 2;
              deltaedge = bestedge_[v];
            }
          }
        }
        for (long b = 0; b < 2 * nv_; ++b) {
          if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
            const MatchingWeight d = slack(bestedge_[b]) / 2;
            if (deltatype == -1 || d < delta) {
              delta = d;
              deltatype = 3;
              deltaedge = bestedge_[b];
            }
          }
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
              (deltatype == -1 || dualvar_[b] < delta)) {
            delta = dualvar_[b];
            deltatype = 4;
            deltablossom = b;
          }
        }
        if (deltatype == -1) {
          deltatype = 1;
          delta = std::max<MatchingWeight>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + nv_));
        }
        for (long v = 0; v < nv_; ++v) {
          if (label_[inblossom_[v]] == 1) dualvar_[v] -= delta;
          else if (label_[inblossom_[v]] == 2) dualvar_[v] += delta;
        }
        for (long b = nv_; b < 2 * nv_; ++b) {
          if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
            if (label_[b] == 1) dualvar_[b] += delta;
            else if (label_[b] == 2) dualvar_[b] -= delta;
          }
        }
        if (deltatype == 1) {
          break;
        } else if (deltatype == 2) {
          allowedge_[deltaedge] = true;
          long i = ei_[deltaedge], j = ej_[deltaedge];
          if (label_[inblossom_[i]] == 0) std::swap(i, j);
          queue_.push_back(i);
        } else if (deltatype == 3) {
          allowedge_[deltaedge] = true;
          queue_.push_back(ei_[deltaedge]);
        } else {
          expand_blossom(deltablossom, false);
        }
      }
      if (!augmented) break;
      for (long b = nv_; b < 2 * nv_; ++b) {
        if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0) {
          expand_blossom(b, true);
        }
      }
    }
    std::vector<long> out(static_cast<std::size_t>(nv_), -1);
    for (long v = 0; v < nv_; ++v) {
      if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
    }
    return out;
  }

 private:
  MatchingWeight slack(long k) const { return dualvar_[ei_[k]] + dualvar_[ej_[k]] - 2 * ew_[k]; }

  void leaves(long b, std::vector<long>& out) const {
    if (b < nv_) {
      out.push_back(b);
      return;
    }
    for (long t : blossomchilds_[b]) leaves(t, out);
  }

  std::vector<long> leaves(long b) const {
    std::vector<long> out;
    leaves(b, out);
    return out;
  }

  void assign_label(long w, int t, long p) {
    const long b = inblossom_[w];
    label_[w] = label_[b] = t;
    labelend_[w] = labelend_[b] = p;
    bestedge_[w] = bestedge_[b] = -1;
    if (t == 1) {
      leaves(b, queue_);
    } else if (t == 2) {
      const long base = blossombase_[b];
      assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
    }
  }

  long scan_blossom(long v, long w) {
    std::vector<long> path;
    long base = -1;
    while (v != -1 || w != -1) {
      long b = inblossom_[v];
      if (label_[b] & 4) {
        base = blossombase_[b];
        break;
      }
      path.push_back(b);
      label_[b] = 5;
      if (labelend_[b] == -1) {
        v = -1;
      } else {
        v = endpoint_[labelend_[b]];
        b = inblossom_[v];
        v = endpoint_[labelend_[b]];
      }
      if (w != -1) std::swap(v, w);
    }
    for (long b : path) label_[b] = 1;
    return base;
  }

  void add_blossom(long base, long k) {
    long v = ei_[k], w = ej_[k];
    const long bb = inblossom_[base];
    long bv = inblossom_[v];
    long bw = inblossom_[w];
    const long b = unused_.back();
    unused_.pop_back();
    blossombase_[b] = base;
    blossomparent_[b] = -1;
    blossomparent_[bb] = b;
    auto& path = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    path.clear();
    endps.clear();
    while (bv != bb) {
      blossomparent_[bv] = b;
      path.push_back(bv);
      endps.push_back(labelend_[bv]);
      v = endpoint_[labelend_[bv]];
      bv = inblossom_[v];
    }
    path.push_back(bb);
    std::reverse(path.begin(), path.end());
    std::reverse(endps.begin(), endps.end());
    endps.push_back(2 * k);
    while (bw != bb) {
      blossomparent_[bw] = b;
      path.push_back(bw);
      endps.push_back(labelend_[bw] ^ 1);
      w = endpoint_[labelend_[bw]];
      bw = inblossom_[w];
    }
    label_[b] = 1;
    labelend_[b] = labelend_[bb];
    dualvar_[b] = 0;
    for (long leaf : leaves(b)) {
      if (label_[inblossom_[leaf]] == 2) queue_.push_back(leaf);
      inblossom_[leaf] = b;
    }
    std::vector<long> bestedgeto(static_cast<std::size_t>(2 * nv_), -1);
    for (long child : path) {
      std::vector<std::vector<long>> nblists;
      if (!has_bestedges_[child]) {
        for (long leaf : leaves(child)) {
          std::vector<long> lst;
          for (long p : neighbend_[leaf]) lst.push_back(p / 2);
          nblists.push_back(std::move(lst));
        }
      } else {
        nblists.push_back(blossombestedges_[child]);
      }
      for (const auto& lst : nblists) {
        for (long kk : lst) {
          long i = ei_[kk], j = ej_[kk];
          if (inblossom_[j] == b) std::swap(i, j);
          const long bj = inblossom_[j];
          if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj]))) {
            bestedgeto[bj] = kk;
          }
        }
      }
      blossombestedges_[child].clear();
      has_bestedges_[child] = false;
      bestedge_[child] = -1;
    }
    auto& be = blossombestedges_[b];
    be.clear();
    for (long kk : bestedgeto) {
      if (kk != -1) be.push_back(kk);
    }
    has_bestedges_[b] = true;
    bestedge_[b] = -1;
    for (long kk : be) {
      if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }
  }

  void expand_blossom(long b, bool endstage) {
    const std::vector<long> childs = blossomchilds_[b];
    for (long s : childs) {
      blossomparent_[s] = -1;
      if (s < nv_) {
        inblossom_[s] = s;
      } else if (endstage && dualvar_[s] == 0) {
        expand_blossom(s, endstage);
      } else {
        for (long leaf : leaves(s)) inblossom_[leaf] = s;
      }
    }
    if (!endstage && label_[b] == 2) {
      const long entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
      const long len = static_cast<long>(childs.size());
      long j = static_cast<long>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
      long jstep, endptrick;
      if (j & 1) {
        j -= len;
        jstep = 1;
        endptrick = 0;
      } else {
        jstep = -1;
        endptrick = 1;
      }
      const auto& endps = blossomendps_[b];
      auto at = [len](const std::vector<long>& v, long idx) { return v[((idx % len) + len) % len]; };
      long p = labelend_[b];
      while (j != 0) {
        label_[endpoint_[p ^ 1]] = 0;
        label_[endpoint_[at(endps, j - endptrick) ^ endptrick ^ 1]] = 0;
        assign_label(endpoint_[p ^ 1], 2, p);
        allowedge_[at(endps, j - endptrick) / 2] = true;
        j += jstep;
        p = at(endps, j - endptrick) ^ endptrick;
        allowedge_[p / 2] = true;
        j += jstep;
      }
      long bv = at(childs, j);
      label_[endpoint_[p ^ 1]] = label_[bv] = 2;
      labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
      bestedge_[bv] = -1;
      j += jstep;
      while (at(childs, j) != entrychild) {
        bv = at(childs, j);
        if (label_[bv] == 1) {
          j += jstep;
          continue;
        }
        long found = -1;
        for (long leaf : leaves(bv)) {
          if (label_[leaf] != 0) {
            found = leaf;
            break;
          }
        }
        if (found != -1) {
          label_[found] = 0;
          label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
          assign_label(found, 2, labelend_[found]);
        }
        j += jstep;
      }
    }
    label_[b] = labelend_[b] = -1;
    blossomchilds_[b].clear();
    blossomendps_[b].clear();
    blossombase_[b] = -1;
    blossombestedges_[b].clear();
    has_bestedges_[b] = false;
    bestedge_[b] = -1;
    unused_.push_back(b);
  }

  void augment_blossom(long b, long v) {
    long t = v;
    while (blossomparent_[t] != b) t = blossomparent_[t];
    if (t >= nv_) augment_blossom(t, v);
    auto& childs = blossomchilds_[b];
    auto& endps = blossomendps_[b];
    const long len = static_cast<long>(childs.size());
    const long i = static_cast<long>(std::find(childs.begin(), childs.end(), t) - childs.begin());
    long j = i;
    long jstep, endptrick;
    if (i & 1) {
      j -= len;
      jstep = 1;
      endptrick = 0;
    } else {
      jstep = -1;
      endptrick = 1;
    }
    auto at = [len](const std::vector<long>& vec, long idx) { return vec[((idx % len) + len) % len]; };
    while (j != 0) {
      j += jstep;
      t = at(childs, j);
      const long p = at(endps, j - endptrick) ^ endptrick;
      if (t >= nv_) augment_blossom(t, endpoint_[p]);
      j += jstep;
      t = at(childs, j);
      if (t >= nv_) augment_blossom(t, endpoint_[p ^ 1]);
      mate_[endpoint_[p]] = p ^ 1;
      mate_[endpoint_[p ^ 1]] = p;
    }
    std::rotate(childs.begin(), childs.begin() + i, childs.end());
    std::rotate(endps.begin(), endps.begin() + i, endps.end());
    blossombase_[b] = blossombase_[childs[0]];
  }

  void augment_matching(long k) {
    const long pairs[2][2] = {{ei_[k], 2 * k + 1}, {ej_[k], 2 * k}};
    for (const auto& sp : pairs) {
      long s = sp[0], p = sp[1];
      while (true) {
        const long bs = inblossom_[s];
        if (bs >= nv_) augment_blossom(bs, s);
        mate_[s] = p;
        if (labelend_[bs] == -1) break;
        const long t = endpoint_[labelend_[bs]];
        const long bt = inblossom_[t];
        s = endpoint_[labelend_[bt]];
        const long j = endpoint_[labelend_[bt] ^ 1];
        if (bt >= nv_) augment_blossom(bt, j);
        mate_[j] = labelend_[bt];
        p = labelend_[bt] ^ 1;
      }
    }
  }

  long nv_, ne_;
  bool maxcard_;
  std::vector<long> ei_, ej_;
  std::vector<MatchingWeight> ew_;
  std::vector<long> endpoint_;
  std::vector<std::vector<long>> neighbend_;
  std::vector<long> mate_;
  std::vector<int> label_;
  std::vector<long> labelend_, inblossom_, blossomparent_;
  std::vector<std::vector<long>> blossomchilds_;
  std::vector<long> blossombase_;
  std::vector<std::vector<long>> blossomendps_;
  std::vector<long> bestedge_;
  std::vector<std::vector<long>> blossombestedges_;
  std::vector<bool> has_bestedges_;
  std::vector<long> unused_;
  std::vector<MatchingWeight> dualvar_;
  std::vector<bool> allowedge_;
  std::vector<long> queue_;
};

}  // namespace

std::vector<long> max_weight_matching(std::size_t n,
                                      const std::vector<std::tuple<std::size_t, std::size_t, MatchingWeight>>& edges,
                                      bool max_cardinality) {
  if (n == 0) return {};
  for (const auto& [i, j, w] : edges) {
    if (i >= n || j >= n || i == j || w < 0) throw std::invalid_argument("max_weight_matching: bad edge");
  }
  return Blossom(n, edges, max_cardinality).run();
}

}  // namespace ssqec
