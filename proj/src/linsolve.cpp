#include "fdflow/linsolve.hpp"

#include <umfpack.h>

#include <cmath>
#include <stdexcept>

#include "fdflow/kernels.hpp"

namespace fdflow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}  // namespace

struct DirectSolver::Impl {
  CsrMatrix a;
  std::vector<double> dr, dc;            // Ruiz row/column scalings
  std::vector<std::int32_t> row_of;      // nnz -> row
  std::vector<std::int32_t> csr_to_csc;  // nnz -> position in CSC storage
  std::vector<int> col_ptr, row_idx;     // fixed CSC pattern
  std::vector<double> csc_vals;          // scaled values, CSC order
  void* symbolic = nullptr;
  void* numeric = nullptr;
  double control[UMFPACK_CONTROL];
  mutable double info[UMFPACK_INFO];
  bool fact_ok = false;

  Impl() {
    umfpack_di_defaults(control);
    control[UMFPACK_IRSTEP] = 0;  // refinement handled by the caller
  }

  ~Impl() {
    if (numeric) umfpack_di_free_numeric(&numeric);
    if (symbolic) umfpack_di_free_symbolic(&symbolic);
  }

  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;

  void build_structure() {
    const Index n = a.rows;
    row_of.resize(static_cast<size_t>(a.nnz()));
    for (Index i = 0; i < n; ++i)
      for (std::int32_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k)
        row_of[k] = i;

    // CSC counterpart of the fixed pattern. Scanning the CSR rows in order
    // places entries row-ascending within each column.
    std::vector<int> col_count(static_cast<size_t>(a.cols), 0);
    for (std::int32_t k = 0; k < a.nnz(); ++k) ++col_count[a.col_idx[k]];
    col_ptr.assign(static_cast<size_t>(a.cols) + 1, 0);
    for (Index c = 0; c < a.cols; ++c) col_ptr[c + 1] = col_ptr[c] + col_count[c];
    std::vector<int> cursor(col_ptr.begin(), col_ptr.end() - 1);
    csr_to_csc.resize(static_cast<size_t>(a.nnz()));
    row_idx.resize(static_cast<size_t>(a.nnz()));
    for (std::int32_t k = 0; k < a.nnz(); ++k) {
      const int pos = cursor[a.col_idx[k]]++;
      csr_to_csc[k] = pos;
      row_idx[pos] = row_of[k];
    }
    for (Index c = 0; c < a.cols; ++c)
      for (int k = col_ptr[c] + 1; k < col_ptr[c + 1]; ++k)
        if (row_idx[k] <= row_idx[k - 1])
          throw std::runtime_error("DirectSolver: duplicate entries in pattern");
    csc_vals.assign(static_cast<size_t>(a.nnz()), 0.0);
  }

  void compute_scaling() {
    const Index n = a.rows;
    dr.assign(static_cast<size_t>(n), 1.0);
    dc.assign(static_cast<size_t>(a.cols), 1.0);
    std::vector<double> rmax(static_cast<size_t>(n));
    std::vector<double> cmax(static_cast<size_t>(a.cols));
    for (int iter = 0; iter < 10; ++iter) {
      std::fill(rmax.begin(), rmax.end(), 0.0);
      std::fill(cmax.begin(), cmax.end(), 0.0);
      for (std::int32_t k = 0; k < a.nnz(); ++k) {
        const double v = std::abs(a.vals[k]) * dr[row_of[k]] * dc[a.col_idx[k]];
        rmax[row_of[k]] = std::max(rmax[row_of[k]], v);
        cmax[a.col_idx[k]] = std::max(cmax[a.col_idx[k]], v);
      }
      bool done = true;
      for (Index i = 0; i < n; ++i) {
        if (rmax[i] > 0.0) {
          if (rmax[i] > 4.0 || rmax[i] < 0.25) done = false;
          dr[i] /= std::sqrt(rmax[i]);
        }
      }
      for (Index j = 0; j < a.cols; ++j) {
        if (cmax[j] > 0.0) {
          if (cmax[j] > 4.0 || cmax[j] < 0.25) done = false;
          dc[j] /= std::sqrt(cmax[j]);
        }
      }
      if (done) break;
    }
  }

  void factorize() {
    compute_scaling();
    for (std::int32_t k = 0; k < a.nnz(); ++k)
      csc_vals[csr_to_csc[k]] = dr[row_of[k]] * a.vals[k] * dc[a.col_idx[k]];
    if (!symbolic) {
      const int st = umfpack_di_symbolic(a.rows, a.cols, col_ptr.data(),
                                         row_idx.data(), csc_vals.data(),
                                         &symbolic, control, info);
      if (st != UMFPACK_OK) {
        fact_ok = false;
        return;
      }
    }
    if (numeric) umfpack_di_free_numeric(&numeric);
    const int st = umfpack_di_numeric(col_ptr.data(), row_idx.data(),
                                      csc_vals.data(), symbolic, &numeric,
                                      control, info);
    fact_ok = (st == UMFPACK_OK);  // a singular-matrix warning is a failure
  }

  // x = A^{-1} b through the scaled factorization.
  void apply_inverse(const double* b, double* x) const {
    const size_t n = static_cast<size_t>(a.rows);
    std::vector<double> t(n), y(n);
    for (size_t i = 0; i < n; ++i) t[i] = dr[i] * b[i];
    umfpack_di_solve(UMFPACK_A, col_ptr.data(), row_idx.data(), csc_vals.data(),
                     y.data(), t.data(), numeric, control, info);
    for (size_t i = 0; i < n; ++i) x[i] = dc[i] * y[i];
  }

  // x = A^{-T} b (UMFPACK_At is the plain transpose for real matrices).
  void apply_inverse_transpose(const double* b, double* x) const {
    const size_t n = static_cast<size_t>(a.rows);
    std::vector<double> t(n), y(n);
    for (size_t i = 0; i < n; ++i) t[i] = dc[i] * b[i];
    umfpack_di_solve(UMFPACK_At, col_ptr.data(), row_idx.data(),
                     csc_vals.data(), y.data(), t.data(), numeric, control,
                     info);
    for (size_t i = 0; i < n; ++i) x[i] = dr[i] * y[i];
  }
};

DirectSolver::DirectSolver(const CsrMatrix& a) : impl_(new Impl) {
  if (a.rows != a.cols) throw std::invalid_argument("DirectSolver: square matrices only");
  impl_->a = a;
  impl_->build_structure();
  impl_->factorize();
}

DirectSolver::~DirectSolver() = default;
DirectSolver::DirectSolver(DirectSolver&&) noexcept = default;
DirectSolver& DirectSolver::operator=(DirectSolver&&) noexcept = default;

bool DirectSolver::factorization_ok() const { return impl_->fact_ok; }

const CsrMatrix& DirectSolver::matrix() const { return impl_->a; }

bool DirectSolver::update_values(const CsrMatrix& a) {
  if (!a.same_pattern(impl_->a))
    throw std::invalid_argument("DirectSolver: pattern changed in update_values");
  impl_->a.vals = a.vals;
  impl_->factorize();
  return impl_->fact_ok;
}

SaddleSolveReport DirectSolver::solve(const std::vector<double>& b,
                                      std::vector<double>& x, double tol) const {
  const Impl& im = *impl_;
  const size_t n = static_cast<size_t>(im.a.rows);
  SaddleSolveReport rep;
  rep.factorization_ok = im.fact_ok;
  x.assign(n, 0.0);
  if (!im.fact_ok) return rep;

  const double bnorm = std::sqrt(kernels::norm2_sq(b.data(), n));
  if (bnorm == 0.0) {
    rep.rel_residual = 0.0;
    rep.converged = true;
    return rep;
  }

  im.apply_inverse(b.data(), x.data());

  std::vector<double> r(n), d(n);
  double prev = kInf;
  for (int it = 0; it <= 15; ++it) {
    im.a.matvec(x.data(), r.data());
    for (size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    const double rel = std::sqrt(kernels::norm2_sq(r.data(), n)) / bnorm;
    rep.rel_residual = rel;
    rep.refine_iterations = it;
    if (rel <= tol || !std::isfinite(rel)) break;
    if (rel > 0.5 * prev) break;  // stagnated
    prev = rel;
    im.apply_inverse(r.data(), d.data());
    kernels::axpy(1.0, d.data(), x.data(), n);
  }
  rep.converged = std::isfinite(rep.rel_residual) && rep.rel_residual <= tol;
  return rep;
}

double DirectSolver::condition_estimate() const {
  const Impl& im = *impl_;
  if (!im.fact_ok) return kInf;
  const size_t n = static_cast<size_t>(im.a.rows);
  if (n == 0) return 1.0;

  // Hager's 1-norm estimator for ||A^{-1}||_1.
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n), xi(n), z(n);
  double est = 0.0;
  Index jprev = -1;
  for (int iter = 0; iter < 5; ++iter) {
    im.apply_inverse(x.data(), y.data());
    double ynorm = 0.0;
    for (size_t i = 0; i < n; ++i) ynorm += std::abs(y[i]);
    est = std::max(est, ynorm);
    for (size_t i = 0; i < n; ++i) xi[i] = (y[i] >= 0.0) ? 1.0 : -1.0;
    im.apply_inverse_transpose(xi.data(), z.data());
    Index j = 0;
    double zmax = 0.0;
    for (size_t i = 0; i < n; ++i) {
      if (std::abs(z[i]) > zmax) {
        zmax = std::abs(z[i]);
        j = static_cast<Index>(i);
      }
    }
    if (zmax <= kernels::dot(z.data(), x.data(), n) || j == jprev) break;
    std::fill(x.begin(), x.end(), 0.0);
    x[j] = 1.0;
    jprev = j;
  }
  if (!std::isfinite(est)) return kInf;
  return im.a.norm_1() * est;
}

SaddleSystem::SaddleSystem(const VelocitySpace& vs, const PressureSpace& ps,
                           const ScalarPattern& sp)
    : vs_(vs), ps_(ps), sp_(sp) {
  const Index ns = vs.n_scalar;
  const Index nu = vs.n_dofs();
  const Index np = ps.n_dofs();
  const Index total = nu + np + 1;

  CsrMatrix b = assemble_divergence(vs, ps);
  for (Index r = 0; r < b.rows; ++r)
    for (std::int32_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k)
      if (vs.dof_on_boundary(b.col_idx[k])) b.vals[k] = 0.0;

  e_ = pressure_mean_vector(ps);

  TripletBuffer tb;
  tb.reserve(2 * static_cast<size_t>(sp.pat.nnz()) + 2 * static_cast<size_t>(b.nnz()) +
             2 * static_cast<size_t>(np));
  for (int comp = 0; comp < 2; ++comp)
    for (Index i = 0; i < ns; ++i)
      for (std::int32_t k = sp.pat.row_ptr[i]; k < sp.pat.row_ptr[i + 1]; ++k)
        tb.add(comp * ns + i, comp * ns + sp.pat.col_idx[k], 0.0);
  for (Index r = 0; r < b.rows; ++r) {
    for (std::int32_t k = b.row_ptr[r]; k < b.row_ptr[r + 1]; ++k) {
      tb.add(nu + r, b.col_idx[k], b.vals[k]);
      tb.add(b.col_idx[k], nu + r, b.vals[k]);
    }
    tb.add(nu + r, nu + np, e_[r]);
    tb.add(nu + np, nu + r, e_[r]);
  }
  full_ = tb.to_csr(total, total);

  // Transposed coupling entries landed in boundary velocity rows; clear them
  // so those rows are exactly identity rows.
  for (Index d = 0; d < nu; ++d) {
    if (!vs.dof_on_boundary(d)) continue;
    for (std::int32_t k = full_.row_ptr[d]; k < full_.row_ptr[d + 1]; ++k)
      if (full_.col_idx[k] >= nu) full_.vals[k] = 0.0;
  }

  for (int comp = 0; comp < 2; ++comp) {
    scatter_[comp].resize(static_cast<size_t>(sp.pat.nnz()));
    for (Index i = 0; i < ns; ++i) {
      for (std::int32_t k = sp.pat.row_ptr[i]; k < sp.pat.row_ptr[i + 1]; ++k) {
        const std::int32_t pos =
            full_.find(comp * ns + i, comp * ns + sp.pat.col_idx[k]);
        if (pos < 0) throw std::logic_error("SaddleSystem: scatter position missing");
        scatter_[comp][k] = pos;
      }
    }
  }
}

bool SaddleSystem::set_velocity_block(const std::vector<double>& a_scalar) {
  scalar_bc_ = a_scalar;
  apply_dirichlet_scalar(vs_, sp_, scalar_bc_, 1.0);
  for (int comp = 0; comp < 2; ++comp) {
    const auto& sc = scatter_[comp];
    for (size_t k = 0; k < sc.size(); ++k) full_.vals[sc[k]] = scalar_bc_[k];
  }
  if (!solver_) {
    solver_ = std::make_unique<DirectSolver>(full_);
    return solver_->factorization_ok();
  }
  return solver_->update_values(full_);
}

std::vector<double> SaddleSystem::build_full_rhs(
    const std::vector<double>& rhs_vel) const {
  const Index nu = vs_.n_dofs();
  std::vector<double> b(static_cast<size_t>(full_.rows), 0.0);
  for (Index d = 0; d < nu; ++d)
    b[d] = vs_.dof_on_boundary(d) ? 0.0 : rhs_vel[d];
  return b;
}

SaddleSystem::Result SaddleSystem::solve(const std::vector<double>& rhs_vel,
                                         double tol) const {
  if (!solver_) throw std::logic_error("SaddleSystem: solve before set_velocity_block");
  const Index nu = vs_.n_dofs();
  const Index np = ps_.n_dofs();

  const std::vector<double> b = build_full_rhs(rhs_vel);
  std::vector<double> x;
  Result res;
  res.report = solver_->solve(b, x, tol);
  res.u.assign(x.begin(), x.begin() + nu);
  res.p.assign(x.begin() + nu, x.begin() + nu + np);
  res.lambda = x[nu + np];
  if (!res.report.factorization_ok) return res;

  // Exact mean-zero shift; |D| = 4.
  const double mean = kernels::dot(e_.data(), res.p.data(), res.p.size()) / 4.0;
  for (double& v : res.p) v -= mean;
  for (Index i = 0; i < np; ++i) x[nu + i] = res.p[i];

  // Re-verify the residual on the shifted solution.
  const double bnorm = std::sqrt(kernels::norm2_sq(b.data(), b.size()));
  std::vector<double> r(b.size());
  full_.matvec(x.data(), r.data());
  for (size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  const double rnorm = std::sqrt(kernels::norm2_sq(r.data(), r.size()));
  res.report.rel_residual = (bnorm == 0.0) ? 0.0 : rnorm / bnorm;
  res.report.converged = res.report.rel_residual <= tol;
  res.ok = res.report.factorization_ok && res.report.converged;
  return res;
}

double SaddleSystem::condition_estimate() const {
  if (!solver_) throw std::logic_error("SaddleSystem: no factorization yet");
  return solver_->condition_estimate();
}

}  // namespace fdflow
