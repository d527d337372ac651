#ifndef FNCOMP_MODEL_HPP
#define FNCOMP_MODEL_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "fncomp/errors.hpp"

namespace fncomp {

// Variable roles. X, Y are the two sources, Z the receiver side information,
// V, W the transmitter messages, F the function output (used for pushforwards).
enum class Role : uint8_t { X = 0, Y, Z, V, W, F };
constexpr int kNumRoles = 6;

using RoleSet = uint32_t; // bitmask over Role

inline RoleSet role_bit(Role r) { return RoleSet{1} << int(r); }
inline RoleSet roles() { return 0; }
template <typename... Rs> RoleSet roles(Role r, Rs... rest) {
    return role_bit(r) | roles(rest...);
}
inline bool role_in(RoleSet s, Role r) { return (s >> int(r)) & 1; }
Role role_from_name(const std::string& name);
std::string role_name(Role r);
std::string role_set_name(RoleSet s);

// ----------------------------------------------------------------------------
// Dense probability tensor with role-tagged axes (axes in Role order).
// ----------------------------------------------------------------------------
class Pmf {
  public:
    Pmf() = default;
    Pmf(std::vector<Role> axes, std::vector<int> dims);

    const std::vector<Role>& axes() const { return axes_; }
    const std::vector<int>& dims() const { return dims_; }
    int axis_of(Role r) const; // -1 if absent
    RoleSet role_set() const;
    size_t size() const { return data_.size(); }

    double& at(const std::vector<int>& idx) { return data_[offset(idx)]; }
    double at(const std::vector<int>& idx) const { return data_[offset(idx)]; }
    double& flat(size_t i) { return data_[i]; }
    double flat(size_t i) const { return data_[i]; }

    void unravel(size_t flat_index, std::vector<int>& idx) const;
    size_t offset(const std::vector<int>& idx) const;

    double sum() const;
    void normalize();
    // Marginal onto `keep` (axes retained in original order).
    Pmf marginal(RoleSet keep) const;

    // Value of this marginal at the cells matching a full-joint index laid out
    // by `parent_axes`. Used when iterating a larger joint.
    double project_at(const std::vector<Role>& parent_axes,
                      const std::vector<int>& parent_idx) const;

  private:
    std::vector<Role> axes_;
    std::vector<int> dims_;
    std::vector<size_t> strides_;
    std::vector<double> data_;
};

// I(A;B|C) in bits, direct summation over the support of `joint`.
// A, B, C must be disjoint; A, B nonempty; all contained in joint's axes.
double conditional_mutual_information(const Pmf& joint, RoleSet A, RoleSet B,
                                      RoleSet C);
// H(A|C) in bits.
double conditional_entropy(const Pmf& joint, RoleSet A, RoleSet C);

// ----------------------------------------------------------------------------
// Problem specification: alphabets, joint pmf p(x,y,z), total function f.
// ----------------------------------------------------------------------------
struct PruneRecord {
    Role role;
    std::string symbol;
};

class ProblemSpec {
  public:
    // Alphabets (ordered symbol labels).
    std::vector<std::string> alphabet_X, alphabet_Y, alphabet_Z, alphabet_F;
    // p(x,y,z), axes (X,Y,Z), sums to 1 within 1e-9, entries >= 0.
    Pmf pmf;
    // f index table: f_of(x,y,z) -> index into alphabet_F. Total.
    std::vector<int> f_table; // x-major, then y, then z
    std::string description;
    std::vector<PruneRecord> pruned; // zero-marginal symbols removed at load

    int nx() const { return int(alphabet_X.size()); }
    int ny() const { return int(alphabet_Y.size()); }
    int nz() const { return int(alphabet_Z.size()); }
    int nf() const { return int(alphabet_F.size()); }

    const std::vector<std::string>& alphabet(Role r) const;
    int alphabet_size(Role r) const { return int(alphabet(r).size()); }

    double p(int x, int y, int z) const {
        return pmf.flat((size_t(x) * ny() + y) * nz() + z);
    }
    int f(int x, int y, int z) const {
        return f_table[(size_t(x) * ny() + y) * nz() + z];
    }

    // Validation used by load_problem and the fixture builders.
    void validate() const;
};

// Parse + validate a problem-file JSON document (see README for the schema).
// Zero-marginal symbols are pruned and recorded in `pruned`.
ProblemSpec load_problem(const std::string& json_text);
std::string problem_to_json(const ProblemSpec& spec);

// True iff |p(x,y|z) - p(x|z)p(y|z)| <= 1e-12 for all (x,y) and all z with
// p(z) > 0.
bool check_conditional_independence(const ProblemSpec& spec);

// Partial invertibility of f with respect to one source: no z and no
// (x1,y1),(x2,y2) on support with x1 != x2 and f(x1,y1,z) = f(x2,y2,z)
// (roles swapped for wrt = Y).
bool check_partially_invertible(const ProblemSpec& spec, Role wrt);

// Joint p(v,x,y,w,z) = p(x,y,z) q(v|x) r(w|y); rows[t][v] = q(v|t).
Pmf make_joint_vxywz(const ProblemSpec& spec,
                     const std::vector<std::vector<double>>& rows_v,
                     const std::vector<std::vector<double>>& rows_w);

// ProblemSpec with the X and Y roles exchanged (f arguments permuted).
ProblemSpec swap_sources(const ProblemSpec& spec);

} // namespace fncomp

#endif
