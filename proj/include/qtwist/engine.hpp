#pragma once

// Shared session state: built modular-symbol spaces and newform duals, with
// a versioned on-disk cache.  A corrupt or mismatched cache file is thrown
// away and rebuilt; it is never partially read.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "qtwist/modsym.hpp"

namespace qtwist {

struct Config {
  std::string cache_dir;   // empty: $QTWIST_CACHE_DIR or ./.qtwist-cache
  int64_t eigen_pmax = 25; // starting point; raised automatically on ambiguity
  int64_t lseries_terms = 0;  // 0 = automatic
  double tolerance = 1e-6;
  int jobs = 1;

  std::string resolved_cache_dir() const {
    if (!cache_dir.empty()) return cache_dir;
    if (const char* env = std::getenv("QTWIST_CACHE_DIR")) return env;
    return ".qtwist-cache";
  }
};

namespace cachefmt {

constexpr const char* kSpaceMagic = "qtwist-space 1";
constexpr const char* kEigenMagic = "qtwist-eigen 1";

inline void put_vec(std::ostream& os, const la::Vec& v) {
  os << v.size();
  for (const auto& x : v) os << ' ' << x;
  os << '\n';
}

inline la::Vec get_vec(std::istream& is) {
  size_t n;
  if (!(is >> n)) throw DataError("cache: vector header");
  la::Vec v(n);
  for (auto& x : v) {
    std::string s;
    if (!(is >> s)) throw DataError("cache: vector entry");
    x = rat_parse(s);
  }
  return v;
}

inline void save_space(const modsym::ModSymSpace& S, const std::string& path) {
  std::ostringstream os;
  os << kSpaceMagic << '\n';
  os << S.level << ' ' << S.dim << ' ' << S.genus << ' ' << S.ncusps << ' ' << S.p1.size()
     << '\n';
  for (auto g : S.free_gens) os << g << ' ';
  os << '\n';
  for (const auto& v : S.coord) put_vec(os, v);
  for (const auto& [to, from] : S.gen_cusps) os << to << ' ' << from << '\n';
  for (const auto& row : S.boundary_mat) put_vec(os, row);
  for (const auto& row : S.star) put_vec(os, row);
  for (const auto& v : S.cuspidal) put_vec(os, v);
  for (const auto& v : S.hz) put_vec(os, v);
  for (const auto& v : S.hz_plus) put_vec(os, v);
  for (const auto& v : S.hz_minus) put_vec(os, v);
  os << "end\n";
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  std::ofstream f(tmp);
  f << os.str();
  f.close();
  std::filesystem::rename(tmp, path);
}

inline std::shared_ptr<modsym::ModSymSpace> load_space(const std::string& path, int64_t level) {
  std::ifstream f(path);
  if (!f) throw DataError("cache: cannot open");
  std::string magic;
  std::getline(f, magic);
  if (magic != kSpaceMagic) throw DataError("cache: bad magic");
  auto sp = std::make_shared<modsym::ModSymSpace>();
  auto& S = *sp;
  size_t np1;
  if (!(f >> S.level >> S.dim >> S.genus >> S.ncusps >> np1)) throw DataError("cache: header");
  if (S.level != level) throw DataError("cache: level mismatch");
  S.p1 = modsym::P1Table::build(level);
  if (S.p1.size() != np1) throw DataError("cache: p1 size mismatch");
  S.free_gens.resize(S.dim);
  for (auto& g : S.free_gens)
    if (!(f >> g)) throw DataError("cache: free gens");
  S.coord.resize(np1);
  for (auto& v : S.coord) v = get_vec(f);
  S.gen_cusps.resize(np1);
  for (auto& [to, from] : S.gen_cusps)
    if (!(f >> to >> from)) throw DataError("cache: gen cusps");
  S.boundary_mat.resize(S.ncusps);
  for (auto& row : S.boundary_mat) row = get_vec(f);
  S.star.resize(S.dim);
  for (auto& row : S.star) row = get_vec(f);
  S.cuspidal.resize(2 * S.genus);
  for (auto& v : S.cuspidal) v = get_vec(f);
  S.hz.resize(2 * S.genus);
  for (auto& v : S.hz) v = get_vec(f);
  S.hz_plus.resize(S.genus);
  for (auto& v : S.hz_plus) v = get_vec(f);
  S.hz_minus.resize(S.genus);
  for (auto& v : S.hz_minus) v = get_vec(f);
  std::string tail;
  if (!(f >> tail) || tail != "end") throw DataError("cache: truncated");
  if (S.genus != int(modsym::genus_x0(level))) throw DataError("cache: genus mismatch");
  return sp;
}

inline void save_eigen(const modsym::EigenData& E, const std::string& path) {
  std::ostringstream os;
  os << kEigenMagic << '\n';
  os << E.level << ' ' << E.curve_key << ' ' << E.pmax << '\n';
  put_vec(os, E.dual_plus);
  put_vec(os, E.dual_minus);
  os << E.eigenvalues.size() << '\n';
  for (const auto& [p, ap] : E.eigenvalues) os << p << ' ' << ap << '\n';
  os << "end\n";
  std::filesystem::create_directories(std::filesystem::path(path).parent_path());
  std::string tmp = path + ".tmp";
  std::ofstream f(tmp);
  f << os.str();
  f.close();
  std::filesystem::rename(tmp, path);
}

inline modsym::EigenData load_eigen(const std::string& path, const modsym::ModSymSpace& S,
                                    const std::string& curve_key, int64_t pmax) {
  std::ifstream f(path);
  if (!f) throw DataError("cache: cannot open");
  std::string magic;
  std::getline(f, magic);
  if (magic != kEigenMagic) throw DataError("cache: bad magic");
  modsym::EigenData E;
  std::string key;
  if (!(f >> E.level >> key >> E.pmax)) throw DataError("cache: eigen header");
  if (E.level != S.level || key != curve_key || E.pmax != pmax)
    throw DataError("cache: eigen key mismatch");
  E.curve_key = key;
  E.dual_plus = get_vec(f);
  E.dual_minus = get_vec(f);
  if (int(E.dual_plus.size()) != S.dim || int(E.dual_minus.size()) != S.dim)
    throw DataError("cache: eigen dimension mismatch");
  size_t n;
  if (!(f >> n)) throw DataError("cache: eigen count");
  for (size_t i = 0; i < n; ++i) {
    int64_t p, ap;
    if (!(f >> p >> ap)) throw DataError("cache: eigen pair");
    E.eigenvalues[p] = ap;
  }
  std::string tail;
  if (!(f >> tail) || tail != "end") throw DataError("cache: truncated");
  for (size_t i = 0; i < S.p1.size(); ++i) {
    E.val_plus.push_back(la::dot(E.dual_plus, S.coord[i]));
    E.val_minus.push_back(la::dot(E.dual_minus, S.coord[i]));
  }
  return E;
}

}  // namespace cachefmt

class Engine {
 public:
  explicit Engine(Config cfg = {}) : cfg_(std::move(cfg)) {}

  const Config& config() const { return cfg_; }

  std::shared_ptr<const modsym::ModSymSpace> space(int64_t level) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = spaces_.find(level);
    if (it != spaces_.end()) return it->second;
    std::string path = cfg_.resolved_cache_dir() + "/space_" + std::to_string(level) + ".qc";
    std::shared_ptr<modsym::ModSymSpace> sp;
    try {
      sp = cachefmt::load_space(path, level);
    } catch (const DataError&) {
      sp = modsym::build_space(level);
      try {
        cachefmt::save_space(*sp, path);
      } catch (...) {
        // cache write failures are non-fatal
      }
    }
    spaces_[level] = sp;
    return sp;
  }

  // Newform dual for a curve; ambiguity is retried with a larger pmax.
  std::shared_ptr<const modsym::EigenData> eigen(const curves::CurveModel& e) {
    if (!e.conductor) throw PreconditionError("eigen: conductor unknown");
    int64_t level = to_i64(*e.conductor);
    auto sp = space(level);
    std::lock_guard<std::mutex> lock(mu_);
    std::string key = std::to_string(level) + "|" + e.key();
    auto it = eigens_.find(key);
    if (it != eigens_.end()) return it->second;
    std::shared_ptr<modsym::EigenData> eg;
    for (int64_t pmax = cfg_.eigen_pmax;; pmax *= 2) {
      if (pmax > 400) throw modsym::AmbiguityError("eigen ambiguity persists up to pmax = 400");
      std::string path = cfg_.resolved_cache_dir() + "/eigen_" + std::to_string(level) + "_" +
                         sanitize(e.key()) + "_p" + std::to_string(pmax) + ".qc";
      try {
        eg = std::make_shared<modsym::EigenData>(cachefmt::load_eigen(path, *sp, e.key(), pmax));
        break;
      } catch (const DataError&) {
      }
      try {
        eg = std::make_shared<modsym::EigenData>(modsym::hecke_eigen(*sp, e, pmax));
        try {
          cachefmt::save_eigen(*eg, path);
        } catch (...) {
        }
        break;
      } catch (const modsym::AmbiguityError&) {
        // raise pmax and retry
      }
    }
    eigens_[key] = eg;
    return eg;
  }

 private:
  static std::string sanitize(std::string s) {
    for (auto& c : s)
      if (c == ',' || c == '-') c = (c == ',') ? '_' : 'm';
    return s;
  }

  Config cfg_;
  std::mutex mu_;
  std::map<int64_t, std::shared_ptr<const modsym::ModSymSpace>> spaces_;
  std::map<std::string, std::shared_ptr<const modsym::EigenData>> eigens_;
};

}  // namespace qtwist
