//! Avoidability of formulas without reversal: adjacency graphs, free sets,
//! deletion, reducibility and division into Zimin words.
//!
//! [`decide_classic`] uses division into `Z_n` as ground truth. Reducibility
//! is computed alongside it as a second certificate; the two agree on every
//! formula in the test suites (unavoidable iff reducible to the empty
//! formula).

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formula::{FormulaR, PatternR, Sym, Variable};
use crate::morphism::{self, Outcome, SearchBudget, SymbolTable, SymbolicMorphism};
use crate::search::{Compiled, SeqTarget};

const MAX_FREE_SET_VARS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A vertex `x^l` or `x^r` of the adjacency graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex(pub Variable, pub Side);

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.1 {
            Side::Left => "l",
            Side::Right => "r",
        };
        write!(f, "{}^{side}", self.0)
    }
}

/// Bipartite graph with an edge `{x^l, y^r}` for every factor `xy`.
#[derive(Debug, Clone)]
pub struct AdjacencyGraph {
    vars: Vec<Variable>,
    edges: BTreeSet<(Variable, Variable)>,
    // component id per vertex: index 2*i for x_i^l, 2*i + 1 for x_i^r
    component: Vec<usize>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn require_reversal_free(phi: &FormulaR) -> Result<()> {
    match phi.fragments().iter().flat_map(|p| p.syms()).find(|s| s.mirrored) {
        Some(s) => Err(Error::MirroredSymbol(s.to_string())),
        None => Ok(()),
    }
}

impl AdjacencyGraph {
    pub fn new(phi: &FormulaR) -> Result<AdjacencyGraph> {
        require_reversal_free(phi)?;
        let vars: Vec<Variable> = phi.variables().into_iter().collect();
        let idx = |v: &Variable| vars.binary_search(v).expect("variable of formula");
        let mut edges = BTreeSet::new();
        let mut parent: Vec<usize> = (0..2 * vars.len()).collect();
        for p in phi.fragments() {
            for w in p.syms().windows(2) {
                edges.insert((w[0].var.clone(), w[1].var.clone()));
                let a = find(&mut parent, 2 * idx(&w[0].var));
                let b = find(&mut parent, 2 * idx(&w[1].var) + 1);
                parent[a] = b;
            }
        }
        let component = (0..parent.len()).map(|i| find(&mut parent, i)).collect();
        Ok(AdjacencyGraph { vars, edges, component })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    /// Edges as `(x, y)` pairs, each standing for `{x^l, y^r}`.
    pub fn edges(&self) -> &BTreeSet<(Variable, Variable)> {
        &self.edges
    }

    fn vertex_index(&self, v: &Vertex) -> Option<usize> {
        let i = self.vars.binary_search(&v.0).ok()?;
        Some(2 * i + (v.1 == Side::Right) as usize)
    }

    pub fn same_component(&self, a: &Vertex, b: &Vertex) -> bool {
        match (self.vertex_index(a), self.vertex_index(b)) {
            (Some(i), Some(j)) => self.component[i] == self.component[j],
            _ => false,
        }
    }

    /// Connected components, each sorted; isolated vertices included.
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut groups: HashMap<usize, BTreeSet<Vertex>> = HashMap::new();
        for (i, v) in self.vars.iter().enumerate() {
            for (k, side) in [(2 * i, Side::Left), (2 * i + 1, Side::Right)] {
                groups.entry(self.component[k]).or_default().insert(Vertex(v.clone(), side));
            }
        }
        let mut out: Vec<BTreeSet<Vertex>> = groups.into_values().collect();
        out.sort();
        out
    }

    /// Components containing at least one edge.
    pub fn nontrivial_components(&self) -> Vec<BTreeSet<Vertex>> {
        self.components().into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn is_free(&self, set: &BTreeSet<Variable>) -> bool {
        !set.is_empty()
            && set.iter().all(|x| {
                set.iter().all(|y| {
                    !self.same_component(&Vertex(x.clone(), Side::Left), &Vertex(y.clone(), Side::Right))
                })
            })
            && set.iter().all(|x| self.vars.binary_search(x).is_ok())
    }
}

pub fn adjacency_graph(phi: &FormulaR) -> Result<AdjacencyGraph> {
    AdjacencyGraph::new(phi)
}

/// All free sets, smallest first, then in lexicographic order.
pub fn free_sets(phi: &FormulaR) -> Result<Vec<BTreeSet<Variable>>> {
    let g = AdjacencyGraph::new(phi)?;
    let n = g.vars.len();
    if n > MAX_FREE_SET_VARS {
        return Err(Error::TooLarge(format!("{n} variables for free-set enumeration")));
    }
    // x can join F only if x^l and x^r are separated; pairs must be compatible both ways
    let lr = |i: usize, j: usize| g.component[2 * i] == g.component[2 * j + 1];
    let mut out: Vec<BTreeSet<Variable>> = (1u32..(1 << n))
        .filter(|mask| {
            let members: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            members.iter().all(|&i| members.iter().all(|&j| !lr(i, j)))
        })
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| g.vars[i].clone()).collect())
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    Ok(out)
}

/// Delete every occurrence of the free set `set`, dropping empty fragments.
/// Fragments are not split at deletion points.
pub fn delete(phi: &FormulaR, set: &BTreeSet<Variable>) -> Result<FormulaR> {
    let g = AdjacencyGraph::new(phi)?;
    if !g.is_free(set) {
        let names: Vec<&str> = set.iter().map(Variable::name).collect();
        return Err(Error::NotFree(format!("{{{}}}", names.join(", "))));
    }
    Ok(phi.delete_vars(set))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionStep {
    pub formula: FormulaR,
    #[serde(serialize_with = "var_names")]
    pub deleted: BTreeSet<Variable>,
}

fn var_names<S: Serializer>(set: &BTreeSet<Variable>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let names: Vec<&str> = set.iter().map(Variable::name).collect();
    names.serialize(s)
}

/// A reduction of a formula to the empty formula: each step deletes a free
/// set of its formula, and the next step's formula is the result.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct ReductionChain {
    pub steps: Vec<ReductionStep>,
}

impl ReductionChain {
    /// Re-check every step against the definitions.
    pub fn verify(&self, start: &FormulaR) -> bool {
        let mut cur = start.clone();
        for step in &self.steps {
            if step.formula != cur {
                return false;
            }
            match delete(&cur, &step.deleted) {
                Ok(next) => cur = next,
                Err(_) => return false,
            }
        }
        cur.is_empty()
    }

    pub fn deleted_sets(&self) -> Vec<BTreeSet<Variable>> {
        self.steps.iter().map(|s| s.deleted.clone()).collect()
    }
}

impl fmt::Display for ReductionChain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for step in &self.steps {
            let names: Vec<&str> = step.deleted.iter().map(Variable::name).collect();
            write!(f, "{} --{{{}}}--> ", step.formula, names.join(","))?;
        }
        f.write_str("{}")
    }
}

fn reduce(phi: &FormulaR, memo: &mut HashMap<FormulaR, Option<Vec<ReductionStep>>>) -> Result<Option<Vec<ReductionStep>>> {
    if phi.is_empty() {
        return Ok(Some(Vec::new()));
    }
    if let Some(known) = memo.get(phi) {
        return Ok(known.clone());
    }
    let mut found = None;
    for set in free_sets(phi)? {
        let next = phi.delete_vars(&set);
        if let Some(rest) = reduce(&next, memo)? {
            let mut steps = vec![ReductionStep { formula: phi.clone(), deleted: set }];
            steps.extend(rest);
            found = Some(steps);
            break;
        }
    }
    memo.insert(phi.clone(), found.clone());
    Ok(found)
}

/// A reduction chain to the empty formula, if one exists.
pub fn is_reducible(phi: &FormulaR) -> Result<Option<ReductionChain>> {
    require_reversal_free(phi)?;
    let mut memo = HashMap::new();
    Ok(reduce(phi, &mut memo)?.map(|steps| ReductionChain { steps }))
}

fn zimin_var(i: usize) -> Variable {
    Variable::new(&format!("x{i}")).expect("valid name")
}

/// `Z_n` over `x1..xn` as a pattern; `None` for `n = 0`.
pub fn zimin_pattern(n: usize) -> Option<PatternR> {
    let mut syms: Vec<Sym> = Vec::new();
    for i in 1..=n {
        let prev = syms.clone();
        syms.push(Sym::plain(&zimin_var(i)));
        syms.extend(prev);
    }
    PatternR::new(syms).ok()
}

/// `Z_n` as a formula; `Z_0` is the empty formula.
pub fn zimin_word(n: usize) -> FormulaR {
    zimin_pattern(n).map(|p| p.as_formula()).unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassicVerdict {
    pub unavoidable: bool,
    /// Variable count `n`, so that the division target is `Z_n`.
    pub n: usize,
    pub division: Option<SymbolicMorphism>,
    pub reduction: Option<ReductionChain>,
}

/// Decide a formula without reversal: unavoidable iff it divides `Z_n`.
pub fn decide_classic(phi: &FormulaR, budget: &SearchBudget) -> Result<ClassicVerdict> {
    require_reversal_free(phi)?;
    let n = phi.variables().len();
    let zn = zimin_word(n);
    let division = match morphism::divides(phi, &zn, budget) {
        Outcome::Found(h) => Some(h),
        Outcome::Absent => None,
        Outcome::Incomplete(i) => return Err(Error::Budget(format!("division into Z_{n}: {i}"))),
    };
    let reduction = is_reducible(phi)?;
    Ok(ClassicVerdict { unavoidable: division.is_some(), n, division, reduction })
}

/// Division of `phi` into `Z_n` sending every variable of the free set to
/// `x1`. Requires that deleting the set leaves an unavoidable formula.
pub fn divide_into_zimin_constrained(
    phi: &FormulaR,
    set: &BTreeSet<Variable>,
    budget: &SearchBudget,
) -> Result<Outcome<SymbolicMorphism>> {
    let residual = delete(phi, set)?;
    if !decide_classic(&residual, budget)?.unavoidable {
        return Err(Error::Precondition(format!("deleting the free set leaves avoidable {residual}")));
    }
    let n = phi.variables().len();
    let zn = zimin_word(n);
    let table = SymbolTable::new(zn.variables());
    let target = SeqTarget {
        seqs: zn.fragments().iter().map(|p| table.encode(p)).collect(),
        mirror_bit: true,
    };
    let problem = Compiled::new(phi);
    let x1 = table.encode(&PatternR::new(vec![Sym::plain(&zimin_var(1))]).expect("nonempty"));
    let fixed = set
        .iter()
        .map(|v| (problem.index_of(v).expect("free-set variable occurs"), x1.clone()))
        .collect();
    let out = morphism::divide_raw(&problem, &target, &table, budget, fixed);
    if let Outcome::Found(h) = &out {
        assert!(h.divides_into(phi, &zn));
    }
    Ok(out)
}
