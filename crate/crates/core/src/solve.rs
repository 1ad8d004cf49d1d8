//! Linear solvers for the assembled SPD system.

use serde::{Deserialize, Serialize};

use crate::assembly::LinearSystem;
use crate::geom::{self, Point, Vec2};
use crate::mesh::Mesh;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SolverMethod {
    /// Preconditioned conjugate gradients.
    #[default]
    Cg,
    /// Sparse Cholesky after nested dissection reordering.
    Direct,
}

/// Preconditioner for [`SolverMethod::Cg`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Preconditioner {
    Jacobi,
    /// Symmetric Gauss-Seidel in natural row order.
    #[default]
    Sgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default)]
    pub method: SolverMethod,
    #[serde(default)]
    pub preconditioner: Preconditioner,
    #[serde(default = "default_tolerance")]
    pub rel_tolerance: f64,
    #[serde(default = "default_max_iterations")]
    pub max_iterations: usize,
}

fn default_tolerance() -> f64 {
    1e-10
}

fn default_max_iterations() -> usize {
    100_000
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            method: SolverMethod::Cg,
            preconditioner: Preconditioner::default(),
            rel_tolerance: default_tolerance(),
            max_iterations: default_max_iterations(),
        }
    }
}

impl SolverConfig {
    pub fn direct() -> Self {
        Self {
            method: SolverMethod::Direct,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tolerance > 0.0 && self.rel_tolerance < 1.0) {
            return Err(Error::Config(format!("rel_tolerance must lie in (0, 1), got {}", self.rel_tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveInfo {
    pub iterations: usize,
    /// `‖b - K u‖ / ‖b‖` over the free vertices.
    pub relative_residual: f64,
}

/// Nodal coefficients of `u_h`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField {
    pub values: Vec<f64>,
    pub info: SolveInfo,
}

impl SolutionField {
    pub fn new(values: Vec<f64>) -> Self {
        Self {
            values,
            info: SolveInfo::default(),
        }
    }

    /// `u_h(x)` for a point `x` in triangle `t`.
    pub fn value_in(&self, mesh: &Mesh, t: usize, x: &Point) -> f64 {
        let lambda = geom::barycentric(&mesh.triangle_points(t), x);
        mesh.triangles()[t].iter().zip(lambda).map(|(&v, l)| l * self.values[v]).sum()
    }

    /// Constant gradient of `u_h` on triangle `t`.
    pub fn gradient(&self, mesh: &Mesh, t: usize) -> Vec2 {
        let tri = mesh.triangle_points(t);
        let two_a = geom::orient(&tri[0], &tri[1], &tri[2]);
        let mut g = Vec2::zeros();
        for (i, &v) in mesh.triangles()[t].iter().enumerate() {
            let p1 = tri[(i + 1) % 3];
            let p2 = tri[(i + 2) % 3];
            g += Vec2::new(p1.y - p2.y, p2.x - p1.x) * (self.values[v] / two_a);
        }
        g
    }
}

pub fn solve(system: &LinearSystem, config: &SolverConfig) -> Result<SolutionField> {
    config.validate()?;
    let mut x = vec![0.0; system.n()];
    for &(v, g) in &system.constrained {
        x[v] = g;
    }
    let free = system.free_mask();
    let info = match config.method {
        SolverMethod::Cg => pcg(&system.matrix, &system.rhs, &mut x, &free, config)?,
        SolverMethod::Direct => {
            let factor = if system.coordinates.len() == system.n() {
                SparseCholesky::factor_with(&system.matrix, coordinate_dissection(&system.matrix, &system.coordinates))?
            } else {
                SparseCholesky::factor(&system.matrix)?
            };
            x = factor.solve(&system.rhs);
            for &(v, g) in &system.constrained {
                x[v] = g;
            }
            SolveInfo {
                iterations: 0,
                relative_residual: residual(&system.matrix, &system.rhs, &x, &free),
            }
        }
    };
    Ok(SolutionField { values: x, info })
}

fn dot_masked(a: &[f64], b: &[f64], mask: &[bool]) -> f64 {
    a.iter().zip(b).zip(mask).filter(|(_, &m)| m).map(|((x, y), _)| x * y).sum()
}

fn residual(k: &CsrMatrix, b: &[f64], x: &[f64], free: &[bool]) -> f64 {
    let kx = k.matvec(x);
    let r: Vec<f64> = b.iter().zip(&kx).map(|(b, k)| b - k).collect();
    let bn = dot_masked(b, b, free).sqrt();
    let rn = dot_masked(&r, &r, free).sqrt();
    if bn == 0.0 {
        rn
    } else {
        rn / bn
    }
}

/// Applies `z = M⁻¹ r`. Rows with a zero inverse diagonal (the constrained
/// ones) get `z = 0`.
fn precondition(k: &CsrMatrix, inv_diag: &[f64], kind: Preconditioner, r: &[f64], z: &mut [f64]) {
    match kind {
        Preconditioner::Jacobi => {
            for ((z, r), d) in z.iter_mut().zip(r).zip(inv_diag) {
                *z = r * d;
            }
        }
        Preconditioner::Sgs => {
            // (D + L) y = r, then (D + U) z = D y.
            for i in 0..k.n() {
                if inv_diag[i] == 0.0 {
                    z[i] = 0.0;
                    continue;
                }
                let (cols, vals) = k.row(i);
                let mut acc = r[i];
                for (&j, &v) in cols.iter().zip(vals) {
                    if j < i {
                        acc -= v * z[j];
                    }
                }
                z[i] = acc * inv_diag[i];
            }
            for i in (0..k.n()).rev() {
                if inv_diag[i] == 0.0 {
                    continue;
                }
                let (cols, vals) = k.row(i);
                let mut acc = 0.0;
                for (&j, &v) in cols.iter().zip(vals) {
                    if j > i {
                        acc += v * z[j];
                    }
                }
                z[i] -= acc * inv_diag[i];
            }
        }
    }
}

/// Preconditioned CG on the free rows. Constrained rows are identity rows
/// whose values are already in `x`.
fn pcg(k: &CsrMatrix, b: &[f64], x: &mut [f64], free: &[bool], config: &SolverConfig) -> Result<SolveInfo> {
    let n = k.n();
    let inv_diag: Vec<f64> = k
        .diagonal()
        .iter()
        .zip(free)
        .map(|(&d, &f)| if f && d > 0.0 { 1.0 / d } else { 0.0 })
        .collect();
    let kind = config.preconditioner;
    let mut r: Vec<f64> = {
        let kx = k.matvec(x);
        (0..n).map(|i| if free[i] { b[i] - kx[i] } else { 0.0 }).collect()
    };
    let bnorm = dot_masked(b, b, free).sqrt();
    if bnorm == 0.0 && dot_masked(&r, &r, free) == 0.0 {
        return Ok(SolveInfo::default());
    }
    let scale = if bnorm > 0.0 { bnorm } else { 1.0 };
    let mut z = vec![0.0; n];
    precondition(k, &inv_diag, kind, &r, &mut z);
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut kp = vec![0.0; n];
    let mut rel = r.iter().map(|v| v * v).sum::<f64>().sqrt() / scale;
    for it in 0..config.max_iterations {
        if rel <= config.rel_tolerance {
            return Ok(SolveInfo {
                iterations: it,
                relative_residual: rel,
            });
        }
        k.matvec_into(&p, &mut kp);
        for i in 0..n {
            if !free[i] {
                kp[i] = 0.0;
            }
        }
        let pkp: f64 = p.iter().zip(&kp).map(|(a, b)| a * b).sum();
        if !(pkp > 0.0) {
            return Err(Error::NotPositiveDefinite { row: usize::MAX, pivot: pkp });
        }
        let alpha = rz / pkp;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * kp[i];
        }
        precondition(k, &inv_diag, kind, &r, &mut z);
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
        rel = r.iter().map(|v| v * v).sum::<f64>().sqrt() / scale;
    }
    if rel <= config.rel_tolerance {
        return Ok(SolveInfo {
            iterations: config.max_iterations,
            relative_residual: rel,
        });
    }
    Err(Error::NotConverged {
        iterations: config.max_iterations,
        residual: rel,
    })
}

const NONE: usize = usize::MAX;

/// Nested dissection ordering of the matrix graph; `perm[new] = old`.
/// Separators are middle levels of a breadth-first level structure rooted at
/// a pseudo-peripheral vertex.
pub fn nested_dissection(k: &CsrMatrix) -> Vec<usize> {
    let n = k.n();
    let mut nd = Dissection {
        k,
        region: vec![0; n],
        level: vec![NONE; n],
        depth: vec![0; n],
        next_region: 1,
        order: Vec::with_capacity(n),
    };
    nd.dissect((0..n).collect(), 0);
    nd.order
}

struct Dissection<'a> {
    k: &'a CsrMatrix,
    region: Vec<usize>,
    level: Vec<usize>,
    depth: Vec<usize>,
    next_region: usize,
    order: Vec<usize>,
}

/// Smallest middle level leaving 30 to 70 percent of the vertices on each
/// side, or failing that the most balanced one.
fn balanced_cut(levels: &[Vec<usize>], total: usize) -> Option<(usize, f64, usize)> {
    if levels.len() < 3 {
        return None;
    }
    let total = total as f64;
    let mut below = levels[0].len();
    let mut window: Option<(usize, f64, usize)> = None;
    let mut fallback: Option<(usize, f64, usize)> = None;
    for (l, level) in levels.iter().enumerate().take(levels.len() - 1).skip(1) {
        let size = level.len();
        let frac = below as f64 / total;
        let above = 1.0 - frac - size as f64 / total;
        let imbalance = (frac - above).abs();
        if frac >= 0.3 && above >= 0.3 && window.is_none_or(|w| (size, imbalance) < (w.0, w.1)) {
            window = Some((size, imbalance, l));
        }
        if fallback.is_none_or(|f| imbalance < f.1) {
            fallback = Some((size, imbalance, l));
        }
        below += size;
    }
    window.or(fallback)
}

impl Dissection<'_> {
    const LEAF: usize = 64;

    /// Vertices of `region` reachable from `start`, grouped by level.
    fn levels(&mut self, start: usize, region: usize) -> Vec<Vec<usize>> {
        let mut levels = vec![vec![start]];
        self.level[start] = 0;
        loop {
            let mut next = Vec::new();
            for &i in levels.last().unwrap() {
                for &j in self.k.row(i).0 {
                    if self.region[j] == region && self.level[j] == NONE {
                        self.level[j] = levels.len();
                        next.push(j);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        for l in &levels {
            for &i in l {
                self.level[i] = NONE;
            }
        }
        levels
    }

    fn new_region(&mut self, verts: &[usize]) -> usize {
        let id = self.next_region;
        self.next_region += 1;
        for &v in verts {
            self.region[v] = id;
        }
        id
    }

    fn dissect(&mut self, verts: Vec<usize>, region: usize) {
        if verts.len() <= Self::LEAF {
            self.order.extend(verts);
            return;
        }
        let first = self.levels(verts[0], region);
        let reached: usize = first.iter().map(Vec::len).sum();
        if reached < verts.len() {
            // Disconnected: split off the component of verts[0].
            let comp: Vec<usize> = first.concat();
            let id = self.new_region(&comp);
            let rest: Vec<usize> = verts.into_iter().filter(|&v| self.region[v] == region).collect();
            let rest_id = self.new_region(&rest);
            self.dissect(comp, id);
            self.dissect(rest, rest_id);
            return;
        }
        // Level structures from both ends of a pseudo-diameter and from a
        // vertex roughly between them; keep the smallest balanced cut.
        let far = *first.last().unwrap().iter().min().unwrap();
        let from_far = self.levels(far, region);
        let other = *from_far.last().unwrap().iter().min().unwrap();
        let from_other = self.levels(other, region);
        for (l, vs) in from_far.iter().enumerate() {
            for &v in vs {
                self.depth[v] = l;
            }
        }
        let mut side = far;
        let mut side_score = 0;
        for (l, vs) in from_other.iter().enumerate() {
            for &v in vs {
                let score = l.min(self.depth[v]);
                if score > side_score || (score == side_score && v < side) {
                    side = v;
                    side_score = score;
                }
            }
        }
        let from_side = self.levels(side, region);
        let mut best: Option<(usize, f64, Vec<Vec<usize>>, usize)> = None;
        for levels in [from_far, from_other, from_side] {
            if let Some((size, imbalance, mid)) = balanced_cut(&levels, verts.len()) {
                if best.as_ref().is_none_or(|b| (size, imbalance) < (b.0, b.1)) {
                    best = Some((size, imbalance, levels, mid));
                }
            }
        }
        let Some((_, _, levels, mid)) = best else {
            self.order.extend(verts);
            return;
        };
        let a: Vec<usize> = levels[..mid].concat();
        let b: Vec<usize> = levels[mid + 1..].concat();
        let separator = levels[mid].clone();
        for &v in &separator {
            self.region[v] = NONE;
        }
        let ia = self.new_region(&a);
        let ib = self.new_region(&b);
        self.dissect(a, ia);
        self.dissect(b, ib);
        self.order.extend(separator);
    }
}

/// Nested dissection by recursive coordinate bisection: each step splits at
/// the median along the axis giving the smaller separator. `perm[new] = old`.
pub fn coordinate_dissection(k: &CsrMatrix, points: &[Point]) -> Vec<usize> {
    let mut g = Bisection {
        k,
        points,
        stamp: vec![0; k.n()],
        next_stamp: 1,
        order: Vec::with_capacity(k.n()),
    };
    g.dissect((0..k.n()).collect());
    g.order
}

struct Bisection<'a> {
    k: &'a CsrMatrix,
    points: &'a [Point],
    stamp: Vec<usize>,
    next_stamp: usize,
    order: Vec<usize>,
}

impl Bisection<'_> {
    const LEAF: usize = 64;

    /// Sorted vertices and the separator (lower-half vertices adjacent to
    /// the upper half) for a median split along `axis`.
    fn split(&mut self, verts: &[usize], axis: usize) -> (Vec<usize>, Vec<usize>) {
        let mut sorted = verts.to_vec();
        sorted.sort_by(|&a, &b| self.points[a][axis].total_cmp(&self.points[b][axis]).then(a.cmp(&b)));
        let mid = sorted.len() / 2;
        let upper = self.next_stamp;
        self.next_stamp += 1;
        for &v in &sorted[mid..] {
            self.stamp[v] = upper;
        }
        let separator = sorted[..mid]
            .iter()
            .copied()
            .filter(|&v| self.k.row(v).0.iter().any(|&j| self.stamp[j] == upper))
            .collect();
        (sorted, separator)
    }

    fn dissect(&mut self, verts: Vec<usize>) {
        if verts.len() <= Self::LEAF {
            self.order.extend(verts);
            return;
        }
        let (sx, sepx) = self.split(&verts, 0);
        let (sy, sepy) = self.split(&verts, 1);
        let (sorted, separator) = if sepy.len() < sepx.len() { (sy, sepy) } else { (sx, sepx) };
        let mid = sorted.len() / 2;
        let cut = self.next_stamp;
        self.next_stamp += 1;
        for &v in &separator {
            self.stamp[v] = cut;
        }
        let lower: Vec<usize> = sorted[..mid].iter().copied().filter(|&v| self.stamp[v] != cut).collect();
        let upper = sorted[mid..].to_vec();
        self.dissect(lower);
        self.dissect(upper);
        self.order.extend(separator);
    }
}

/// Sparse Cholesky factor `P K Pᵀ = L Lᵀ` after nested dissection, computed
/// row by row along the elimination tree. `L` is stored by columns with the
/// diagonal first.
pub struct SparseCholesky {
    perm: Vec<usize>,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
}

impl SparseCholesky {
    pub fn factor(k: &CsrMatrix) -> Result<Self> {
        Self::factor_with(k, nested_dissection(k))
    }

    /// Factors with a caller-supplied ordering (`perm[new] = old`).
    pub fn factor_with(k: &CsrMatrix, perm: Vec<usize>) -> Result<Self> {
        let n = k.n();
        let c = k.permuted(&perm);

        let mut parent = vec![NONE; n];
        let mut ancestor = vec![NONE; n];
        for row in 0..n {
            for &j in c.row(row).0 {
                let mut i = j;
                while i != NONE && i < row {
                    let next = ancestor[i];
                    ancestor[i] = row;
                    if next == NONE {
                        parent[i] = row;
                    }
                    i = next;
                }
            }
        }

        let mut mark = vec![NONE; n];
        let mut stack = vec![0; n];
        let mut path = vec![0; n];
        let mut counts = vec![1usize; n];
        for row in 0..n {
            let top = ereach(&c, row, &parent, &mut mark, &mut stack, &mut path);
            for &j in &stack[top..] {
                counts[j] += 1;
            }
        }
        let mut col_ptr = Vec::with_capacity(n + 1);
        col_ptr.push(0);
        for j in 0..n {
            col_ptr.push(col_ptr[j] + counts[j]);
        }
        let mut next = col_ptr[..n].to_vec();
        let mut row_idx = vec![0; col_ptr[n]];
        let mut values = vec![0.0; col_ptr[n]];

        mark.fill(NONE);
        let mut x = vec![0.0; n];
        for row in 0..n {
            let top = ereach(&c, row, &parent, &mut mark, &mut stack, &mut path);
            let (cols, vals) = c.row(row);
            for (&j, &v) in cols.iter().zip(vals) {
                if j <= row {
                    x[j] = v;
                }
            }
            let mut d = x[row];
            x[row] = 0.0;
            for &j in &stack[top..] {
                let l = x[j] / values[col_ptr[j]];
                x[j] = 0.0;
                for q in col_ptr[j] + 1..next[j] {
                    x[row_idx[q]] -= values[q] * l;
                }
                d -= l * l;
                row_idx[next[j]] = row;
                values[next[j]] = l;
                next[j] += 1;
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite { row: perm[row], pivot: d });
            }
            row_idx[next[row]] = row;
            values[next[row]] = d.sqrt();
            next[row] += 1;
        }
        Ok(Self {
            perm,
            col_ptr,
            row_idx,
            values,
        })
    }

    /// Stored entries of `L`.
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.perm.len();
        let mut y: Vec<f64> = self.perm.iter().map(|&old| b[old]).collect();
        for j in 0..n {
            let range = self.col_ptr[j]..self.col_ptr[j + 1];
            y[j] /= self.values[range.start];
            let yj = y[j];
            for q in range.start + 1..range.end {
                y[self.row_idx[q]] -= self.values[q] * yj;
            }
        }
        for j in (0..n).rev() {
            let range = self.col_ptr[j]..self.col_ptr[j + 1];
            let mut s = y[j];
            for q in range.start + 1..range.end {
                s -= self.values[q] * y[self.row_idx[q]];
            }
            y[j] = s / self.values[range.start];
        }
        let mut x = vec![0.0; n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = y[new];
        }
        x
    }
}

/// Pattern of row `row` of `L` (excluding the diagonal) as `stack[top..]`,
/// in an order suitable for the sparse triangular solve.
fn ereach(c: &CsrMatrix, row: usize, parent: &[usize], mark: &mut [usize], stack: &mut [usize], path: &mut [usize]) -> usize {
    let n = c.n();
    let mut top = n;
    mark[row] = row;
    for &j in c.row(row).0 {
        if j >= row {
            continue;
        }
        let mut len = 0;
        let mut i = j;
        while mark[i] != row {
            path[len] = i;
            len += 1;
            mark[i] = row;
            i = parent[i];
        }
        while len > 0 {
            len -= 1;
            top -= 1;
            stack[top] = path[len];
        }
    }
    top
}
