#include "fncomp/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace fncomp {

namespace {

constexpr double kNormTol = 1e-9;
constexpr double kCiTol = 1e-12;

inline double log2_safe(double x) { return std::log2(x); }

} // namespace

Role role_from_name(const std::string& name) {
    if (name == "X") return Role::X;
    if (name == "Y") return Role::Y;
    if (name == "Z") return Role::Z;
    if (name == "V") return Role::V;
    if (name == "W") return Role::W;
    if (name == "F") return Role::F;
    fail(ErrorKind::Role, "unknown role '" + name + "'");
}

std::string role_name(Role r) {
    switch (r) {
        case Role::X: return "X";
        case Role::Y: return "Y";
        case Role::Z: return "Z";
        case Role::V: return "V";
        case Role::W: return "W";
        case Role::F: return "F";
    }
    return "?";
}

std::string role_set_name(RoleSet s) {
    std::string out;
    for (int i = 0; i < kNumRoles; ++i) {
        if (role_in(s, Role(i))) {
            if (!out.empty()) out += ",";
            out += role_name(Role(i));
        }
    }
    return out.empty() ? "-" : out;
}

// ---------------------------------------------------------------- Pmf

Pmf::Pmf(std::vector<Role> axes, std::vector<int> dims)
    : axes_(std::move(axes)), dims_(std::move(dims)) {
    if (axes_.size() != dims_.size())
        fail(ErrorKind::Role, "axes/dims size mismatch");
    for (size_t i = 1; i < axes_.size(); ++i)
        if (int(axes_[i]) <= int(axes_[i - 1]))
            fail(ErrorKind::Role, "pmf axes must be distinct and role-ordered");
    size_t total = 1;
    strides_.assign(axes_.size(), 1);
    for (size_t i = axes_.size(); i-- > 0;) {
        strides_[i] = total;
        total *= size_t(std::max(dims_[i], 0));
    }
    data_.assign(total, 0.0);
}

int Pmf::axis_of(Role r) const {
    for (size_t i = 0; i < axes_.size(); ++i)
        if (axes_[i] == r) return int(i);
    return -1;
}

RoleSet Pmf::role_set() const {
    RoleSet s = 0;
    for (Role r : axes_) s |= role_bit(r);
    return s;
}

size_t Pmf::offset(const std::vector<int>& idx) const {
    size_t off = 0;
    for (size_t i = 0; i < axes_.size(); ++i) off += strides_[i] * size_t(idx[i]);
    return off;
}

void Pmf::unravel(size_t flat_index, std::vector<int>& idx) const {
    idx.resize(axes_.size());
    for (size_t i = 0; i < axes_.size(); ++i) {
        idx[i] = int(flat_index / strides_[i]);
        flat_index %= strides_[i];
    }
}

double Pmf::sum() const { return std::accumulate(data_.begin(), data_.end(), 0.0); }

void Pmf::normalize() {
    double s = sum();
    if (s <= 0) fail(ErrorKind::Normalization, "cannot normalize zero mass");
    for (double& v : data_) v /= s;
}

Pmf Pmf::marginal(RoleSet keep) const {
    std::vector<Role> out_axes;
    std::vector<int> out_dims;
    for (size_t i = 0; i < axes_.size(); ++i) {
        if (role_in(keep, axes_[i])) {
            out_axes.push_back(axes_[i]);
            out_dims.push_back(dims_[i]);
        }
    }
    Pmf out(out_axes, out_dims);
    std::vector<int> idx, sub(out_axes.size());
    for (size_t f = 0; f < data_.size(); ++f) {
        if (data_[f] == 0.0) continue;
        unravel(f, idx);
        size_t k = 0;
        for (size_t i = 0; i < axes_.size(); ++i)
            if (role_in(keep, axes_[i])) sub[k++] = idx[i];
        out.at(sub) += data_[f];
    }
    return out;
}

double Pmf::project_at(const std::vector<Role>& parent_axes,
                       const std::vector<int>& parent_idx) const {
    size_t off = 0;
    size_t k = 0;
    for (size_t i = 0; i < parent_axes.size() && k < axes_.size(); ++i) {
        if (parent_axes[i] == axes_[k]) {
            off += strides_[k] * size_t(parent_idx[i]);
            ++k;
        }
    }
    return data_[off];
}

double conditional_mutual_information(const Pmf& joint, RoleSet A, RoleSet B,
                                      RoleSet C) {
    if ((A & B) || (A & C) || (B & C))
        fail(ErrorKind::Role, "role sets must be disjoint");
    if (!A || !B) fail(ErrorKind::Role, "A and B must be nonempty");
    RoleSet have = joint.role_set();
    if ((A | B | C) & ~have)
        fail(ErrorKind::Role, "role set not covered by joint");

    Pmf m_abc = joint.marginal(A | B | C);
    Pmf m_ac = m_abc.marginal(A | C);
    Pmf m_bc = m_abc.marginal(B | C);
    Pmf m_c = C ? m_abc.marginal(C) : Pmf();

    double total = 0.0;
    std::vector<int> idx;
    for (size_t f = 0; f < m_abc.size(); ++f) {
        double p_abc = m_abc.flat(f);
        if (p_abc <= 0.0) continue;
        m_abc.unravel(f, idx);
        double p_ac = m_ac.project_at(m_abc.axes(), idx);
        double p_bc = m_bc.project_at(m_abc.axes(), idx);
        double p_c = C ? m_c.project_at(m_abc.axes(), idx) : 1.0;
        total += p_abc * log2_safe((p_abc * p_c) / (p_ac * p_bc));
    }
    // Direct summation can leave float dust below zero.
    if (total < 0 && total > -1e-9) total = 0.0;
    return total;
}

double conditional_entropy(const Pmf& joint, RoleSet A, RoleSet C) {
    if (A & C) fail(ErrorKind::Role, "role sets must be disjoint");
    if (!A) fail(ErrorKind::Role, "A must be nonempty");
    Pmf m_ac = joint.marginal(A | C);
    Pmf m_c = C ? m_ac.marginal(C) : Pmf();
    double total = 0.0;
    std::vector<int> idx;
    for (size_t f = 0; f < m_ac.size(); ++f) {
        double p_ac = m_ac.flat(f);
        if (p_ac <= 0.0) continue;
        m_ac.unravel(f, idx);
        double p_c = C ? m_c.project_at(m_ac.axes(), idx) : 1.0;
        total += p_ac * log2_safe(p_c / p_ac);
    }
    if (total < 0 && total > -1e-9) total = 0.0;
    return total;
}

// ---------------------------------------------------------------- ProblemSpec

const std::vector<std::string>& ProblemSpec::alphabet(Role r) const {
    switch (r) {
        case Role::X: return alphabet_X;
        case Role::Y: return alphabet_Y;
        case Role::Z: return alphabet_Z;
        case Role::F: return alphabet_F;
        default: fail(ErrorKind::Role, "no alphabet for role " + role_name(r));
    }
}

void ProblemSpec::validate() const {
    if (alphabet_X.empty() || alphabet_Y.empty() || alphabet_Z.empty() ||
        alphabet_F.empty())
        fail(ErrorKind::Schema, "empty alphabet");
    double s = pmf.sum();
    if (std::abs(s - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "pmf sums to " << s;
        fail(ErrorKind::Normalization, os.str());
    }
    for (size_t i = 0; i < pmf.size(); ++i)
        if (pmf.flat(i) < 0.0)
            fail(ErrorKind::Normalization, "negative probability");
    if (f_table.size() != size_t(nx()) * size_t(ny()) * size_t(nz()))
        fail(ErrorKind::PartialFunction, "f table is not total");
    for (int v : f_table)
        if (v < 0 || v >= nf())
            fail(ErrorKind::Schema, "f value outside F alphabet");
}

namespace {

using nlohmann::json;

int find_symbol(const std::vector<std::string>& alphabet, const std::string& s,
                const char* axis) {
    auto it = std::find(alphabet.begin(), alphabet.end(), s);
    if (it == alphabet.end())
        fail(ErrorKind::Schema,
             std::string("unknown ") + axis + " symbol '" + s + "'");
    return int(it - alphabet.begin());
}

std::vector<std::string> read_alphabet(const json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_array() || doc[key].empty())
        fail(ErrorKind::Schema, std::string("missing alphabet ") + key);
    std::vector<std::string> out;
    for (const auto& v : doc[key]) {
        if (!v.is_string())
            fail(ErrorKind::Schema, std::string(key) + " symbols must be strings");
        out.push_back(v.get<std::string>());
    }
    std::vector<std::string> sorted = out;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        fail(ErrorKind::Schema, std::string("duplicate symbol in ") + key);
    return out;
}

std::string entry_symbol(const json& e, const char* key) {
    if (!e.contains(key)) fail(ErrorKind::Schema, std::string("entry missing '") + key + "'");
    const auto& v = e[key];
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    fail(ErrorKind::Schema, std::string("entry field '") + key + "' must be a symbol");
}

} // namespace

ProblemSpec load_problem(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        fail(ErrorKind::Schema, std::string("JSON parse failure: ") + e.what());
    }

    ProblemSpec spec;
    spec.alphabet_X = read_alphabet(doc, "X");
    spec.alphabet_Y = read_alphabet(doc, "Y");
    spec.alphabet_Z = read_alphabet(doc, "Z");
    spec.alphabet_F = read_alphabet(doc, "F");
    if (doc.contains("description") && doc["description"].is_string())
        spec.description = doc["description"].get<std::string>();

    spec.pmf = Pmf({Role::X, Role::Y, Role::Z},
                   {spec.nx(), spec.ny(), spec.nz()});
    if (!doc.contains("p") || !doc["p"].is_array())
        fail(ErrorKind::Schema, "missing pmf entry list 'p'");
    for (const auto& e : doc["p"]) {
        int x = find_symbol(spec.alphabet_X, entry_symbol(e, "x"), "X");
        int y = find_symbol(spec.alphabet_Y, entry_symbol(e, "y"), "Y");
        int z = find_symbol(spec.alphabet_Z, entry_symbol(e, "z"), "Z");
        if (!e.contains("p") || !e["p"].is_number())
            fail(ErrorKind::Schema, "pmf entry missing numeric 'p'");
        double pv = e["p"].get<double>();
        if (pv < 0.0) fail(ErrorKind::Normalization, "negative probability");
        spec.pmf.at({x, y, z}) += pv;
    }
    double s = spec.pmf.sum();
    if (std::abs(s - 1.0) > kNormTol) {
        std::ostringstream os;
        os << "pmf sums to " << s;
        fail(ErrorKind::Normalization, os.str());
    }

    spec.f_table.assign(size_t(spec.nx()) * spec.ny() * spec.nz(), -1);
    if (!doc.contains("f") || !doc["f"].is_array())
        fail(ErrorKind::Schema, "missing function table 'f'");
    for (const auto& e : doc["f"]) {
        int x = find_symbol(spec.alphabet_X, entry_symbol(e, "x"), "X");
        int y = find_symbol(spec.alphabet_Y, entry_symbol(e, "y"), "Y");
        int z = find_symbol(spec.alphabet_Z, entry_symbol(e, "z"), "Z");
        int v = find_symbol(spec.alphabet_F, entry_symbol(e, "v"), "F");
        spec.f_table[(size_t(x) * spec.ny() + y) * spec.nz() + z] = v;
    }
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z)
                if (spec.f(x, y, z) < 0) {
                    fail(ErrorKind::PartialFunction,
                         "f undefined at (" + spec.alphabet_X[x] + "," +
                             spec.alphabet_Y[y] + "," + spec.alphabet_Z[z] + ")");
                }

    // Prune symbols with zero marginal probability. The graph constructions only see
    // the support, so this never changes computed quantities.
    auto prune_axis = [&](Role role) {
        Pmf marg = spec.pmf.marginal(role_bit(role));
        const auto& alphabet = spec.alphabet(role);
        std::vector<int> keep;
        for (int i = 0; i < int(alphabet.size()); ++i) {
            if (marg.flat(size_t(i)) > 0.0) {
                keep.push_back(i);
            } else {
                spec.pruned.push_back({role, alphabet[i]});
            }
        }
        if (int(keep.size()) == int(alphabet.size())) return;
        if (keep.empty()) fail(ErrorKind::Normalization, "no support left on axis");
        ProblemSpec out = spec;
        auto& out_alpha = role == Role::X ? out.alphabet_X
                        : role == Role::Y ? out.alphabet_Y
                                          : out.alphabet_Z;
        out_alpha.clear();
        for (int i : keep) out_alpha.push_back(alphabet[size_t(i)]);
        out.pmf = Pmf({Role::X, Role::Y, Role::Z},
                      {out.nx(), out.ny(), out.nz()});
        out.f_table.assign(size_t(out.nx()) * out.ny() * out.nz(), -1);
        for (int x = 0; x < out.nx(); ++x)
            for (int y = 0; y < out.ny(); ++y)
                for (int z = 0; z < out.nz(); ++z) {
                    int ox = role == Role::X ? keep[size_t(x)] : x;
                    int oy = role == Role::Y ? keep[size_t(y)] : y;
                    int oz = role == Role::Z ? keep[size_t(z)] : z;
                    out.pmf.at({x, y, z}) = spec.p(ox, oy, oz);
                    out.f_table[(size_t(x) * out.ny() + y) * out.nz() + z] =
                        spec.f(ox, oy, oz);
                }
        spec = std::move(out);
    };
    prune_axis(Role::X);
    prune_axis(Role::Y);
    prune_axis(Role::Z);

    spec.validate();
    return spec;
}

std::string problem_to_json(const ProblemSpec& spec) {
    json doc;
    doc["X"] = spec.alphabet_X;
    doc["Y"] = spec.alphabet_Y;
    doc["Z"] = spec.alphabet_Z;
    doc["F"] = spec.alphabet_F;
    if (!spec.description.empty()) doc["description"] = spec.description;
    json p = json::array(), f = json::array();
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z) {
                if (spec.p(x, y, z) > 0.0)
                    p.push_back({{"x", spec.alphabet_X[x]},
                                 {"y", spec.alphabet_Y[y]},
                                 {"z", spec.alphabet_Z[z]},
                                 {"p", spec.p(x, y, z)}});
                f.push_back({{"x", spec.alphabet_X[x]},
                             {"y", spec.alphabet_Y[y]},
                             {"z", spec.alphabet_Z[z]},
                             {"v", spec.alphabet_F[size_t(spec.f(x, y, z))]}});
            }
    doc["p"] = p;
    doc["f"] = f;
    return doc.dump(2);
}

bool check_conditional_independence(const ProblemSpec& spec) {
    std::vector<double> pz(size_t(spec.nz()), 0.0);
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z) pz[size_t(z)] += spec.p(x, y, z);
    for (int z = 0; z < spec.nz(); ++z) {
        if (pz[size_t(z)] <= 0.0) continue;
        std::vector<double> px(size_t(spec.nx()), 0.0), py(size_t(spec.ny()), 0.0);
        for (int x = 0; x < spec.nx(); ++x)
            for (int y = 0; y < spec.ny(); ++y) {
                double c = spec.p(x, y, z) / pz[size_t(z)];
                px[size_t(x)] += c;
                py[size_t(y)] += c;
            }
        for (int x = 0; x < spec.nx(); ++x)
            for (int y = 0; y < spec.ny(); ++y) {
                double lhs = spec.p(x, y, z) / pz[size_t(z)];
                if (std::abs(lhs - px[size_t(x)] * py[size_t(y)]) > kCiTol)
                    return false;
            }
    }
    return true;
}

bool check_partially_invertible(const ProblemSpec& spec, Role wrt) {
    if (wrt != Role::X && wrt != Role::Y)
        fail(ErrorKind::Role, "wrt must be X or Y");
    // Support triples grouped by (z, f-value); the wrt-coordinate must be
    // constant within each group.
    for (int z = 0; z < spec.nz(); ++z) {
        std::map<int, int> seen; // f value -> wrt symbol
        for (int x = 0; x < spec.nx(); ++x)
            for (int y = 0; y < spec.ny(); ++y) {
                if (spec.p(x, y, z) <= 0.0) continue;
                int key = spec.f(x, y, z);
                int coord = wrt == Role::X ? x : y;
                auto [it, inserted] = seen.emplace(key, coord);
                if (!inserted && it->second != coord) return false;
            }
    }
    return true;
}

Pmf make_joint_vxywz(const ProblemSpec& spec,
                     const std::vector<std::vector<double>>& rows_v,
                     const std::vector<std::vector<double>>& rows_w) {
    int nv = rows_v.empty() ? 0 : int(rows_v[0].size());
    int nw = rows_w.empty() ? 0 : int(rows_w[0].size());
    if (int(rows_v.size()) != spec.nx() || int(rows_w.size()) != spec.ny())
        fail(ErrorKind::Role, "channel row count does not match alphabet");
    Pmf joint({Role::X, Role::Y, Role::Z, Role::V, Role::W},
              {spec.nx(), spec.ny(), spec.nz(), nv, nw});
    for (int x = 0; x < spec.nx(); ++x)
        for (int y = 0; y < spec.ny(); ++y)
            for (int z = 0; z < spec.nz(); ++z) {
                double base = spec.p(x, y, z);
                if (base <= 0.0) continue;
                for (int v = 0; v < nv; ++v) {
                    double pv = base * rows_v[size_t(x)][size_t(v)];
                    if (pv <= 0.0) continue;
                    for (int w = 0; w < nw; ++w) {
                        double pw = pv * rows_w[size_t(y)][size_t(w)];
                        if (pw > 0.0) joint.at({x, y, z, v, w}) = pw;
                    }
                }
            }
    return joint;
}

ProblemSpec swap_sources(const ProblemSpec& spec) {
    ProblemSpec out;
    out.alphabet_X = spec.alphabet_Y;
    out.alphabet_Y = spec.alphabet_X;
    out.alphabet_Z = spec.alphabet_Z;
    out.alphabet_F = spec.alphabet_F;
    out.description = spec.description + " (sources swapped)";
    out.pmf = Pmf({Role::X, Role::Y, Role::Z}, {out.nx(), out.ny(), out.nz()});
    out.f_table.assign(size_t(out.nx()) * out.ny() * out.nz(), -1);
    for (int x = 0; x < out.nx(); ++x)
        for (int y = 0; y < out.ny(); ++y)
            for (int z = 0; z < out.nz(); ++z) {
                out.pmf.at({x, y, z}) = spec.p(y, x, z);
                out.f_table[(size_t(x) * out.ny() + y) * out.nz() + z] =
                    spec.f(y, x, z);
            }
    return out;
}

} // namespace fncomp
