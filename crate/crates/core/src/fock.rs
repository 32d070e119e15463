//! Slave-boson operators on a truncated Fock space.
//!
//! The electron creation operator is represented as `c†_{iσ} = f†_{iσ} b_i`
//! with the per-site constraint `n_{i↑} + n_{i↓} + b†_i b_i = 1`. Matrices
//! are dense and complex; the system is at most two sites with a boson
//! cutoff of at most three quanta per site.
//!
//! Basis order: a state is the tuple `(n_0, …, n_{M−1}, nb_0, …, nb_{S−1})`
//! of fermion occupations (modes site-major, ↑ before ↓) followed by boson
//! occupations per site, and states are sorted lexicographically with the
//! first entry most significant. Fermion signs use the Jordan–Wigner string
//! over the same mode order.

use std::fmt;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::numfmt::sci;

pub const MAX_SITES: usize = 2;
pub const MAX_BOSON_CUTOFF: usize = 3;
/// Pass threshold for every relation in [`verify_projected_algebra`].
pub const RELATION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FockError {
    #[error("mode {0} is not in the basis")]
    UnknownMode(FermionMode),
    #[error("site {0} is not in the basis")]
    UnknownSite(usize),
    #[error("spin label `{0}` is not one of up, down")]
    UnknownSpin(String),
    #[error("{sites} sites with boson cutoff {cutoff} is outside 1..={MAX_SITES} sites, 1..={MAX_BOSON_CUTOFF} quanta")]
    UnsupportedSize { sites: usize, cutoff: usize },
}

impl FockError {
    pub fn kind(&self) -> &'static str {
        match self {
            FockError::UnknownMode(_) => "UnknownMode",
            FockError::UnknownSite(_) => "UnknownSite",
            FockError::UnknownSpin(_) => "UnknownSpin",
            FockError::UnsupportedSize { .. } => "UnsupportedSize",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const BOTH: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn parse(label: &str) -> Result<Spin, FockError> {
        match label {
            "up" | "↑" => Ok(Spin::Up),
            "down" | "↓" => Ok(Spin::Down),
            other => Err(FockError::UnknownSpin(other.to_string())),
        }
    }

    fn offset(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

impl fmt::Display for Spin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Spin::Up => "up",
            Spin::Down => "down",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FermionMode {
    pub site: usize,
    pub spin: Spin,
}

impl fmt::Display for FermionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.site, self.spin)
    }
}

/// One basis state: fermion occupations per mode, boson occupations per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FockState {
    pub fermions: Vec<bool>,
    pub bosons: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FockBasis {
    sites: usize,
    cutoff: usize,
}

impl FockBasis {
    pub fn new(sites: usize, cutoff: usize) -> Result<Self, FockError> {
        if !(1..=MAX_SITES).contains(&sites) || !(1..=MAX_BOSON_CUTOFF).contains(&cutoff) {
            return Err(FockError::UnsupportedSize { sites, cutoff });
        }
        Ok(FockBasis { sites, cutoff })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn modes(&self) -> Vec<FermionMode> {
        (0..self.sites)
            .flat_map(|site| Spin::BOTH.map(|spin| FermionMode { site, spin }))
            .collect()
    }

    fn mode_count(&self) -> usize {
        2 * self.sites
    }

    fn boson_states(&self) -> usize {
        (self.cutoff + 1).pow(self.sites as u32)
    }

    /// `2^{modes} · (N_b + 1)^{sites}`.
    pub fn dim(&self) -> usize {
        (1 << self.mode_count()) * self.boson_states()
    }

    fn mode_index(&self, mode: FermionMode) -> Result<usize, FockError> {
        if mode.site >= self.sites {
            return Err(FockError::UnknownMode(mode));
        }
        Ok(2 * mode.site + mode.spin.offset())
    }

    fn check_site(&self, site: usize) -> Result<(), FockError> {
        if site >= self.sites {
            return Err(FockError::UnknownSite(site));
        }
        Ok(())
    }

    pub fn state(&self, index: usize) -> FockState {
        let m = self.mode_count();
        let base = self.cutoff + 1;
        let mut boson_part = index % self.boson_states();
        let fermion_part = index / self.boson_states();
        let fermions = (0..m).map(|k| fermion_part >> (m - 1 - k) & 1 == 1).collect();
        let mut bosons = vec![0; self.sites];
        for s in (0..self.sites).rev() {
            bosons[s] = boson_part % base;
            boson_part /= base;
        }
        FockState { fermions, bosons }
    }

    pub fn index(&self, state: &FockState) -> usize {
        let m = self.mode_count();
        let fermion_part = state
            .fermions
            .iter()
            .enumerate()
            .filter(|(_, &n)| n)
            .map(|(k, _)| 1usize << (m - 1 - k))
            .sum::<usize>();
        let boson_part = state
            .bosons
            .iter()
            .fold(0, |acc, &n| acc * (self.cutoff + 1) + n);
        fermion_part * self.boson_states() + boson_part
    }

    pub fn states(&self) -> impl Iterator<Item = FockState> + '_ {
        (0..self.dim()).map(|i| self.state(i))
    }
}

/// Square complex matrix over a [`FockBasis`].
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn zeros(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::zeros(dim, dim),
        }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    pub fn from_matrix(matrix: DMatrix<Complex64>) -> Self {
        assert!(matrix.is_square(), "operator matrix must be square");
        DenseOperator { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn adjoint(&self) -> Self {
        DenseOperator {
            matrix: self.matrix.adjoint(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        DenseOperator {
            matrix: &self.matrix * &other.matrix,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        DenseOperator {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DenseOperator {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.mul(other).add(&other.mul(self))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn apply(&self, v: &nalgebra::DVector<Complex64>) -> nalgebra::DVector<Complex64> {
        &self.matrix * v
    }

    /// Eigenvalues of a Hermitian operator, ascending.
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    /// Text export: a `dim <n>` header, then one row per line as
    /// whitespace-separated `re im` pairs.
    pub fn to_text(&self) -> String {
        let n = self.dim();
        let mut out = format!("dim {n}\n");
        for r in 0..n {
            let row: Vec<String> = (0..n)
                .map(|c| {
                    let z = self.matrix[(r, c)];
                    format!("{} {}", sci(z.re), sci(z.im))
                })
                .collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// Fermion annihilation and creation operators `(f, f†)` for `mode`.
pub fn build_fermion(mode: FermionMode, basis: &FockBasis) -> Result<(DenseOperator, DenseOperator), FockError> {
    let k = basis.mode_index(mode)?;
    let mut dag = DenseOperator::zeros(basis.dim());
    for (col, state) in basis.states().enumerate() {
        if state.fermions[k] {
            continue;
        }
        let parity = state.fermions[..k].iter().filter(|&&n| n).count();
        let sign = if parity % 2 == 0 { 1.0 } else { -1.0 };
        let mut target = state;
        target.fermions[k] = true;
        dag.matrix[(basis.index(&target), col)] = Complex64::new(sign, 0.0);
    }
    Ok((dag.adjoint(), dag))
}

/// Truncated boson ladder `(b, b†)` at `site`.
///
/// `b†` annihilates the top state `N_b`, so `[b, b†] = I` holds only on
/// occupations below the cutoff; on the top state it equals `−N_b`.
pub fn build_boson(site: usize, basis: &FockBasis) -> Result<(DenseOperator, DenseOperator), FockError> {
    basis.check_site(site)?;
    let mut dag = DenseOperator::zeros(basis.dim());
    for (col, state) in basis.states().enumerate() {
        let n = state.bosons[site];
        if n == basis.cutoff {
            continue;
        }
        let mut target = state;
        target.bosons[site] = n + 1;
        dag.matrix[(basis.index(&target), col)] = Complex64::new(((n + 1) as f64).sqrt(), 0.0);
    }
    Ok((dag.adjoint(), dag))
}

/// Electron creation operator `c†_{iσ} = f†_{iσ} b_i`.
pub fn electron_op(site: usize, spin: Spin, basis: &FockBasis) -> Result<DenseOperator, FockError> {
    basis.check_site(site)?;
    let (_, f_dag) = build_fermion(FermionMode { site, spin }, basis)?;
    let (b, _) = build_boson(site, basis)?;
    Ok(f_dag.mul(&b))
}

/// `n_{i↑} + n_{i↓} + b†_i b_i`.
pub fn constraint_operator(site: usize, basis: &FockBasis) -> Result<DenseOperator, FockError> {
    basis.check_site(site)?;
    let mut total = DenseOperator::zeros(basis.dim());
    for spin in Spin::BOTH {
        let (f, f_dag) = build_fermion(FermionMode { site, spin }, basis)?;
        total = total.add(&f_dag.mul(&f));
    }
    let (b, b_dag) = build_boson(site, basis)?;
    Ok(total.add(&b_dag.mul(&b)))
}

/// Orthogonal projector onto the eigenvalue-1 eigenspace of the constraint
/// at `site`. The constraint is diagonal in the occupation basis, so the
/// projector is too.
pub fn constraint_projector(site: usize, basis: &FockBasis) -> Result<DenseOperator, FockError> {
    let c = constraint_operator(site, basis)?;
    let mut p = DenseOperator::zeros(basis.dim());
    for i in 0..basis.dim() {
        if (c.matrix[(i, i)].re - 1.0).abs() < 0.5 {
            p.matrix[(i, i)] = Complex64::new(1.0, 0.0);
        }
    }
    Ok(p)
}

/// Product of the constraint projectors of every site.
pub fn physical_projector(basis: &FockBasis) -> DenseOperator {
    (0..basis.sites()).fold(DenseOperator::identity(basis.dim()), |acc, s| {
        acc.mul(&constraint_projector(s, basis).expect("site in range"))
    })
}

/// Local state of one site inside the physical subspace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SiteState {
    Holon,
    Spinon(Spin),
}

impl SiteState {
    /// Site states in projected-basis order.
    pub const ALL: [SiteState; 3] = [SiteState::Holon, SiteState::Spinon(Spin::Up), SiteState::Spinon(Spin::Down)];

    fn slot(self) -> usize {
        match self {
            SiteState::Holon => 0,
            SiteState::Spinon(Spin::Up) => 1,
            SiteState::Spinon(Spin::Down) => 2,
        }
    }
}

/// The physical subspace with its own basis: three states per site
/// (holon, ↑, ↓), site-major, mapped into the Fock space by an isometry.
#[derive(Debug, Clone)]
pub struct PhysicalSubspace {
    sites: usize,
    /// `dim × 3^sites` isometry; column `j` is the Fock state of projected
    /// basis state `j`.
    embedding: DMatrix<Complex64>,
}

impl PhysicalSubspace {
    pub fn new(basis: &FockBasis) -> Self {
        let sites = basis.sites();
        let d = 3usize.pow(sites as u32);
        let mut embedding = DMatrix::zeros(basis.dim(), d);
        for j in 0..d {
            let mut state = FockState {
                fermions: vec![false; 2 * sites],
                bosons: vec![0; sites],
            };
            for (site, local) in Self::decode(sites, j).into_iter().enumerate() {
                match local {
                    SiteState::Holon => state.bosons[site] = 1,
                    SiteState::Spinon(spin) => state.fermions[2 * site + spin.offset()] = true,
                }
            }
            embedding[(basis.index(&state), j)] = Complex64::new(1.0, 0.0);
        }
        PhysicalSubspace { sites, embedding }
    }

    fn decode(sites: usize, mut j: usize) -> Vec<SiteState> {
        let mut out = vec![SiteState::Holon; sites];
        for s in (0..sites).rev() {
            out[s] = SiteState::ALL[j % 3];
            j /= 3;
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.embedding.ncols()
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    /// Index of a product of site states in the projected basis.
    pub fn index_of(&self, locals: &[SiteState]) -> usize {
        locals.iter().fold(0, |acc, s| acc * 3 + s.slot())
    }

    /// `V† A V`.
    pub fn restrict(&self, op: &DenseOperator) -> DMatrix<Complex64> {
        self.embedding.adjoint() * op.matrix() * &self.embedding
    }

    pub fn embedding(&self) -> &DMatrix<Complex64> {
        &self.embedding
    }
}

/// Hubbard operators built directly in the projected basis, with a
/// fermion-parity string on earlier sites. Independent of the slave-boson
/// matrices.
#[derive(Debug, Clone)]
pub struct HubbardAlgebra {
    sites: usize,
}

impl HubbardAlgebra {
    pub fn new(sites: usize) -> Self {
        HubbardAlgebra { sites }
    }

    fn local(a: SiteState, b: SiteState) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(3, 3);
        m[(a.slot(), b.slot())] = Complex64::new(1.0, 0.0);
        m
    }

    fn parity() -> DMatrix<Complex64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(-1.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]))
    }

    fn embed(&self, site: usize, local: DMatrix<Complex64>, fermionic: bool) -> DMatrix<Complex64> {
        let mut out = DMatrix::<Complex64>::identity(1, 1);
        for s in 0..self.sites {
            let factor = if s == site {
                local.clone()
            } else if s < site && fermionic {
                Self::parity()
            } else {
                DMatrix::identity(3, 3)
            };
            out = out.kronecker(&factor);
        }
        out
    }

    /// `X^{σ0}` at `site`: the projected creation operator.
    pub fn creation(&self, site: usize, spin: Spin) -> DMatrix<Complex64> {
        self.embed(site, Self::local(SiteState::Spinon(spin), SiteState::Holon), true)
    }

    /// `X^{ab}` at `site`, bosonic (no parity string).
    pub fn projector_like(&self, site: usize, a: SiteState, b: SiteState) -> DMatrix<Complex64> {
        self.embed(site, Self::local(a, b), false)
    }

    /// Right side of `{X^{0σ}, X^{σ'0}} = δ_{σσ'} X^{00} + X^{σ'σ}`.
    pub fn anticommutator_rhs(&self, site: usize, sigma: Spin, sigma_prime: Spin) -> DMatrix<Complex64> {
        let mut m = self.projector_like(site, SiteState::Spinon(sigma_prime), SiteState::Spinon(sigma));
        if sigma == sigma_prime {
            m += self.projector_like(site, SiteState::Holon, SiteState::Holon);
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationCheck {
    pub name: String,
    pub max_violation: f64,
    pub pass: bool,
}

impl RelationCheck {
    fn new(name: impl Into<String>, max_violation: f64) -> Self {
        RelationCheck {
            name: name.into(),
            max_violation,
            pass: max_violation <= RELATION_TOLERANCE,
        }
    }
}

impl fmt::Display for RelationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "relation={} max_violation={} pass={}",
            self.name,
            sci(self.max_violation),
            self.pass
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraReport {
    pub sites: usize,
    pub cutoff: usize,
    pub physical_dim: usize,
    pub relations: Vec<RelationCheck>,
}

impl AlgebraReport {
    pub fn all_pass(&self) -> bool {
        self.relations.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&RelationCheck> {
        self.relations.iter().find(|r| r.name == name)
    }
}

impl fmt::Display for AlgebraReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "sites={} boson_cutoff={} physical_dim={}",
            self.sites, self.cutoff, self.physical_dim
        )?;
        for r in &self.relations {
            writeln!(f, "{r}")?;
        }
        Ok(())
    }
}

fn dmax(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Checks the projected electron algebra on the physical subspace.
///
/// Relations, per site `i` and spins `σ, σ'`:
/// - `number_max_eigenvalue`: largest eigenvalue of `P (Σ_σ c†_σ c_σ) P`
///   is 1, which also shows the no-double-occupancy inequality holds on
///   the constrained subspace;
/// - `no_double_occupancy`: `P c†↑ c†↓ P = 0`;
/// - `nilpotent`: `P c†_σ c†_σ P = 0`;
/// - `constraint_commutes`: `[C_j, c†_{iσ}] = 0` for every site `j`;
/// - `physical_invariance`: `(1 − P) c†_σ P = 0`;
/// - `holon_matrix_element`: `⟨holon| c_σ c†_σ |holon⟩ = 1`;
/// - `hubbard_creation`: `V† c†_σ V = X^{σ0}`;
/// - `hubbard_anticommutator`: `{V† c_σ V, V† c†_{σ'} V} = δ X^{00} + X^{σ'σ}`;
/// - `intersite_anticommutator` (two sites): projected operators on
///   different sites anticommute;
/// - `fermion_car`, `boson_ccr_below_cutoff`, `fermion_boson_commute`:
///   the constituent algebra itself.
pub fn verify_projected_algebra(basis: &FockBasis) -> AlgebraReport {
    let dim = basis.dim();
    let sites = basis.sites();
    let p = physical_projector(basis);
    let q = DenseOperator::identity(dim).sub(&p);
    let space = PhysicalSubspace::new(basis);
    let hubbard = HubbardAlgebra::new(sites);
    let mut rel = Vec::new();

    let cdag = |s, spin| electron_op(s, spin, basis).expect("site in range");

    // constituent algebra
    let modes = basis.modes();
    let mut car: f64 = 0.0;
    for &a in &modes {
        let (fa, fa_dag) = build_fermion(a, basis).expect("mode in range");
        for &b in &modes {
            let (fb, fb_dag) = build_fermion(b, basis).expect("mode in range");
            let delta = if a == b { DenseOperator::identity(dim) } else { DenseOperator::zeros(dim) };
            car = car
                .max(fa.anticommutator(&fb_dag).sub(&delta).max_abs())
                .max(fa.anticommutator(&fb).max_abs())
                .max(fa_dag.anticommutator(&fb_dag).max_abs());
        }
    }
    rel.push(RelationCheck::new("fermion_car", car));

    let mut ccr: f64 = 0.0;
    let mut mixed: f64 = 0.0;
    for s in 0..sites {
        let (b, b_dag) = build_boson(s, basis).expect("site in range");
        let comm = b.commutator(&b_dag);
        for (i, state) in basis.states().enumerate() {
            if state.bosons[s] < basis.cutoff() {
                for j in 0..dim {
                    let expected = if i == j { 1.0 } else { 0.0 };
                    ccr = ccr.max((comm.matrix[(i, j)] - Complex64::new(expected, 0.0)).norm());
                }
            }
        }
        for &m in &modes {
            let (f, f_dag) = build_fermion(m, basis).expect("mode in range");
            mixed = mixed
                .max(f.commutator(&b).max_abs())
                .max(f.commutator(&b_dag).max_abs())
                .max(f_dag.commutator(&b).max_abs())
                .max(f_dag.commutator(&b_dag).max_abs());
        }
    }
    rel.push(RelationCheck::new("boson_ccr_below_cutoff", ccr));
    rel.push(RelationCheck::new("fermion_boson_commute", mixed));

    let all_holon = vec![SiteState::Holon; sites];
    let holon_index = space.index_of(&all_holon);

    for i in 0..sites {
        let number = Spin::BOTH
            .iter()
            .map(|&spin| {
                let c_dag = cdag(i, spin);
                c_dag.mul(&c_dag.adjoint())
            })
            .fold(DenseOperator::zeros(dim), |acc, n| acc.add(&n));
        let projected = p.mul(&number).mul(&p);
        let max_ev = projected
            .hermitian_eigenvalues()
            .last()
            .copied()
            .unwrap_or(f64::NAN);
        rel.push(RelationCheck::new(
            format!("number_max_eigenvalue[site={i}]"),
            (max_ev - 1.0).abs(),
        ));

        let double = p.mul(&cdag(i, Spin::Up)).mul(&cdag(i, Spin::Down)).mul(&p);
        rel.push(RelationCheck::new(
            format!("no_double_occupancy[site={i}]"),
            double.max_abs(),
        ));

        for spin in Spin::BOTH {
            let c_dag = cdag(i, spin);
            let c = c_dag.adjoint();
            let tag = format!("site={i},spin={spin}");

            rel.push(RelationCheck::new(
                format!("nilpotent[{tag}]"),
                p.mul(&c_dag).mul(&c_dag).mul(&p).max_abs(),
            ));

            let comm = (0..sites)
                .map(|j| {
                    constraint_operator(j, basis)
                        .expect("site in range")
                        .commutator(&c_dag)
                        .max_abs()
                })
                .fold(0.0, f64::max);
            rel.push(RelationCheck::new(format!("constraint_commutes[{tag}]"), comm));

            rel.push(RelationCheck::new(
                format!("physical_invariance[{tag}]"),
                q.mul(&c_dag).mul(&p).max_abs(),
            ));

            let cc_dag = space.restrict(&c.mul(&c_dag));
            rel.push(RelationCheck::new(
                format!("holon_matrix_element[{tag}]"),
                (cc_dag[(holon_index, holon_index)] - Complex64::new(1.0, 0.0)).norm(),
            ));

            rel.push(RelationCheck::new(
                format!("hubbard_creation[{tag}]"),
                dmax(&(space.restrict(&c_dag) - hubbard.creation(i, spin))),
            ));

            for spin2 in Spin::BOTH {
                let proj_c = space.restrict(&c);
                let proj_c_dag2 = space.restrict(&cdag(i, spin2));
                let anti = &proj_c * &proj_c_dag2 + &proj_c_dag2 * &proj_c;
                rel.push(RelationCheck::new(
                    format!("hubbard_anticommutator[site={i},spins={spin},{spin2}]"),
                    dmax(&(anti - hubbard.anticommutator_rhs(i, spin, spin2))),
                ));
            }
        }
    }

    if sites == 2 {
        let mut worst: f64 = 0.0;
        for s1 in Spin::BOTH {
            for s2 in Spin::BOTH {
                let a_dag = space.restrict(&cdag(0, s1));
                let b_dag = space.restrict(&cdag(1, s2));
                let a = a_dag.adjoint();
                worst = worst
                    .max(dmax(&(&a * &b_dag + &b_dag * &a)))
                    .max(dmax(&(&a_dag * &b_dag + &b_dag * &a_dag)));
            }
        }
        rel.push(RelationCheck::new("intersite_anticommutator", worst));
    }

    AlgebraReport {
        sites,
        cutoff: basis.cutoff(),
        physical_dim: space.dim(),
        relations: rel,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DVector;

    fn basis(sites: usize, cutoff: usize) -> FockBasis {
        FockBasis::new(sites, cutoff).unwrap()
    }

    #[test]
    fn dimensions_and_order() {
        assert_eq!(basis(1, 1).dim(), 8);
        assert_eq!(basis(2, 2).dim(), 144);
        assert_eq!(basis(2, 3).dim(), 256);
        let b = basis(2, 2);
        for i in 0..b.dim() {
            assert_eq!(b.index(&b.state(i)), i);
        }
        // fermion bits major: the last state has every mode filled
        let last = b.state(b.dim() - 1);
        assert!(last.fermions.iter().all(|&n| n));
        assert_eq!(last.bosons, vec![2, 2]);
        assert_eq!(b.state(1).bosons, vec![0, 1]);
    }

    #[test]
    fn unsupported_sizes() {
        assert!(FockBasis::new(0, 1).is_err());
        assert!(FockBasis::new(3, 1).is_err());
        assert_eq!(
            FockBasis::new(1, 4).unwrap_err(),
            FockError::UnsupportedSize { sites: 1, cutoff: 4 }
        );
    }

    #[test]
    fn single_mode_car_and_exclusion() {
        let b = basis(1, 1);
        let (f, f_dag) = build_fermion(FermionMode { site: 0, spin: Spin::Up }, &b).unwrap();
        assert_eq!(f.anticommutator(&f_dag).sub(&DenseOperator::identity(b.dim())).max_abs(), 0.0);
        assert_eq!(f_dag.mul(&f_dag).max_abs(), 0.0);
    }

    #[test]
    fn distinct_modes_anticommute() {
        let b = basis(2, 1);
        let (_, up) = build_fermion(FermionMode { site: 0, spin: Spin::Up }, &b).unwrap();
        let (_, down) = build_fermion(FermionMode { site: 1, spin: Spin::Down }, &b).unwrap();
        assert_eq!(up.anticommutator(&down).max_abs(), 0.0);
    }

    #[test]
    fn unknown_mode_and_site() {
        let b = basis(1, 1);
        let mode = FermionMode { site: 1, spin: Spin::Up };
        assert_eq!(build_fermion(mode, &b).unwrap_err(), FockError::UnknownMode(mode));
        assert_eq!(build_boson(1, &b).unwrap_err(), FockError::UnknownSite(1));
        assert_eq!(electron_op(2, Spin::Down, &b).unwrap_err(), FockError::UnknownSite(2));
        assert!(constraint_projector(1, &b).is_err());
        assert_eq!(Spin::parse("sideways").unwrap_err().kind(), "UnknownSpin");
    }

    #[test]
    fn boson_ladder_elements() {
        let b = basis(1, 3);
        let (_, b_dag) = build_boson(0, &b).unwrap();
        for n in 1..=3 {
            let from = b.index(&FockState { fermions: vec![false, false], bosons: vec![n - 1] });
            let to = b.index(&FockState { fermions: vec![false, false], bosons: vec![n] });
            assert_eq!(b_dag.matrix()[(to, from)].re, (n as f64).sqrt());
        }
        // truncation edge: [b, b†] = −N_b on the top state
        let (bb, bb_dag) = build_boson(0, &b).unwrap();
        let top = b.index(&FockState { fermions: vec![false, false], bosons: vec![3] });
        assert!((bb.commutator(&bb_dag).matrix()[(top, top)].re + 3.0).abs() < 1e-14);
    }

    #[test]
    fn two_level_ladder() {
        let b = basis(1, 1);
        let (ann, cre) = build_boson(0, &b).unwrap();
        let zero = b.index(&FockState { fermions: vec![false, false], bosons: vec![0] });
        let one = b.index(&FockState { fermions: vec![false, false], bosons: vec![1] });
        assert_eq!(cre.matrix()[(one, zero)].re, 1.0);
        assert_eq!(ann.matrix()[(zero, one)].re, 1.0);
    }

    #[test]
    fn electron_on_holon() {
        let b = basis(1, 1);
        let holon = b.index(&FockState { fermions: vec![false, false], bosons: vec![1] });
        let mut v = DVector::zeros(b.dim());
        v[holon] = Complex64::new(1.0, 0.0);
        for spin in Spin::BOTH {
            let out = electron_op(0, spin, &b).unwrap().apply(&v);
            let mut fermions = vec![false, false];
            fermions[spin.offset()] = true;
            let target = b.index(&FockState { fermions, bosons: vec![0] });
            for i in 0..b.dim() {
                let expected = if i == target { 1.0 } else { 0.0 };
                assert_eq!(out[i], Complex64::new(expected, 0.0));
            }
        }
        // boson vacuum is annihilated
        let mut vac = DVector::zeros(b.dim());
        vac[b.index(&FockState { fermions: vec![false, true], bosons: vec![0] })] = Complex64::new(1.0, 0.0);
        assert_eq!(electron_op(0, Spin::Up, &b).unwrap().apply(&vac).norm(), 0.0);
    }

    #[test]
    fn projector_rank_and_axioms() {
        let b = basis(1, 1);
        let p = constraint_projector(0, &b).unwrap();
        let rank: f64 = (0..b.dim()).map(|i| p.matrix()[(i, i)].re).sum();
        assert_eq!(rank, 3.0);
        assert_eq!(p.mul(&p).sub(&p).max_abs(), 0.0);
        assert_eq!(p.adjoint().sub(&p).max_abs(), 0.0);
    }

    #[test]
    fn physical_dimension_independent_of_cutoff() {
        for cutoff in 1..=3 {
            let b = basis(1, cutoff);
            let p = physical_projector(&b);
            let rank: f64 = (0..b.dim()).map(|i| p.matrix()[(i, i)].re).sum();
            assert_eq!(rank, 3.0);
        }
    }

    #[test]
    fn double_occupancy_projects_out() {
        let b = basis(1, 2);
        let p = physical_projector(&b);
        let op = p
            .mul(&electron_op(0, Spin::Up, &b).unwrap())
            .mul(&electron_op(0, Spin::Down, &b).unwrap())
            .mul(&p);
        assert_eq!(op.max_abs(), 0.0);
    }

    #[test]
    fn one_site_report_passes() {
        let r = verify_projected_algebra(&basis(1, 1));
        assert_eq!(r.physical_dim, 3);
        assert!(r.all_pass(), "{r}");
        assert!(r.get("number_max_eigenvalue[site=0]").unwrap().max_violation < 1e-12);
    }

    #[test]
    fn export_format() {
        let b = basis(1, 1);
        let text = constraint_projector(0, &b).unwrap().to_text();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("dim 8"));
        let first = lines.next().unwrap();
        assert_eq!(first.split_whitespace().count(), 16);
        assert_eq!(text.lines().count(), 9);
    }
}
