//! CNF formulas with exactly-3-literal clauses, DIMACS parsing, and the two
//! clause semantics the reductions encode: ordinary 3-SAT and 1-in-3-SAT.

use std::fmt::Write as _;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        assert!(var >= 1, "variables are 1-based");
        Literal { var, positive: false }
    }

    pub fn holds_under(self, value: bool) -> bool {
        value == self.positive
    }

    fn dimacs(self) -> i64 {
        let v = self.var as i64;
        if self.positive {
            v
        } else {
            -v
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Clause(pub [Literal; 3]);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Formula {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(num_vars: usize, clauses: Vec<Clause>) -> Self {
        let f = Formula { num_vars, clauses };
        for clause in &f.clauses {
            for lit in clause.0 {
                assert!(lit.var >= 1 && lit.var <= num_vars, "literal out of range");
            }
        }
        f
    }

    /// Occurrences of each polarity per variable, 1-based access via var-1.
    pub fn occurrence_counts(&self) -> Vec<(usize, usize)> {
        let mut counts = vec![(0usize, 0usize); self.num_vars];
        for clause in &self.clauses {
            for lit in clause.0 {
                let slot = &mut counts[lit.var - 1];
                if lit.positive {
                    slot.0 += 1;
                } else {
                    slot.1 += 1;
                }
            }
        }
        counts
    }
}

/// Truth value per variable; index 0 holds variable 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment(pub Vec<bool>);

impl Assignment {
    pub fn value(&self, var: usize) -> bool {
        self.0[var - 1]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Semantics {
    /// At least one true literal per clause.
    #[serde(rename = "3sat")]
    ThreeSat,
    /// Exactly one true literal occurrence per clause; a repeated literal
    /// counts once per occurrence.
    #[serde(rename = "1in3")]
    OneInThree,
}

impl Semantics {
    pub fn name(self) -> &'static str {
        match self {
            Semantics::ThreeSat => "3sat",
            Semantics::OneInThree => "1in3",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "3sat" => Ok(Semantics::ThreeSat),
            "1in3" => Ok(Semantics::OneInThree),
            other => Err(format!("unknown semantics {other:?}; expected 3sat or 1in3")),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DimacsError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: clause has {len} literals, need exactly 3")]
    WrongArity { line: usize, len: usize },
    #[error("line {line}: literal {lit} outside 1..={num_vars}")]
    LiteralOutOfRange { line: usize, lit: i64, num_vars: usize },
    #[error("missing `p cnf <vars> <clauses>` header")]
    MissingHeader,
    #[error("header promises {expected} clauses, found {got}")]
    ClauseCountMismatch { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("assignment covers {got} variables, formula has {expected}")]
    Partial { expected: usize, got: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SatError {
    #[error("{num_vars} variables exceed the brute-force cap of {cap}")]
    TooManyVariables { num_vars: usize, cap: usize },
}

/// Strict DIMACS CNF: `c` comment lines, one `p cnf n m` header, clauses as
/// 0-terminated literal runs. Clauses may span lines; arity must be 3.
pub fn parse_dimacs(text: &str) -> Result<Formula, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0usize;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(DimacsError::Syntax { line: line_no, msg: "second header".into() });
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[0] != "p" || parts[1] != "cnf" {
                return Err(DimacsError::Syntax {
                    line: line_no,
                    msg: format!("malformed header {line:?}"),
                });
            }
            let n = parts[2].parse::<usize>().map_err(|_| DimacsError::Syntax {
                line: line_no,
                msg: format!("bad variable count {:?}", parts[2]),
            })?;
            let m = parts[3].parse::<usize>().map_err(|_| DimacsError::Syntax {
                line: line_no,
                msg: format!("bad clause count {:?}", parts[3]),
            })?;
            header = Some((n, m));
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for token in line.split_whitespace() {
            let lit: i64 = token.parse().map_err(|_| DimacsError::Syntax {
                line: line_no,
                msg: format!("expected a literal, found {token:?}"),
            })?;
            if lit == 0 {
                if pending.len() != 3 {
                    return Err(DimacsError::WrongArity {
                        line: line_no,
                        len: pending.len(),
                    });
                }
                clauses.push(Clause([pending[0], pending[1], pending[2]]));
                pending.clear();
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var == 0 || var > num_vars {
                return Err(DimacsError::LiteralOutOfRange { line: line_no, lit, num_vars });
            }
            if pending.is_empty() {
                pending_line = line_no;
            }
            pending.push(Literal { var, positive: lit > 0 });
        }
    }
    let (num_vars, num_clauses) = header.ok_or(DimacsError::MissingHeader)?;
    if !pending.is_empty() {
        return Err(DimacsError::WrongArity { line: pending_line, len: pending.len() });
    }
    if clauses.len() != num_clauses {
        return Err(DimacsError::ClauseCountMismatch { expected: num_clauses, got: clauses.len() });
    }
    Ok(Formula { num_vars, clauses })
}

pub fn to_dimacs(formula: &Formula) -> String {
    let mut out = String::new();
    writeln!(out, "p cnf {} {}", formula.num_vars, formula.clauses.len()).unwrap();
    for clause in &formula.clauses {
        let [a, b, c] = clause.0;
        writeln!(out, "{} {} {} 0", a.dimacs(), b.dimacs(), c.dimacs()).unwrap();
    }
    out
}

pub fn evaluate(formula: &Formula, assignment: &Assignment, semantics: Semantics) -> Result<bool, EvalError> {
    if assignment.0.len() != formula.num_vars {
        return Err(EvalError::Partial { expected: formula.num_vars, got: assignment.0.len() });
    }
    Ok(formula.clauses.iter().all(|clause| {
        let true_occurrences = clause
            .0
            .iter()
            .filter(|lit| lit.holds_under(assignment.value(lit.var)))
            .count();
        match semantics {
            Semantics::ThreeSat => true_occurrences >= 1,
            Semantics::OneInThree => true_occurrences == 1,
        }
    }))
}

/// Exhaustive search in lexicographic order with true before false, so the
/// first hit for (x or y or z) under 1-in-3 is (T, F, F).
pub fn brute_force_sat(formula: &Formula, semantics: Semantics) -> Result<Option<Assignment>, SatError> {
    const CAP: usize = 24;
    let n = formula.num_vars;
    if n > CAP {
        return Err(SatError::TooManyVariables { num_vars: n, cap: CAP });
    }
    for raw in (0..1u64 << n).rev() {
        let assignment = Assignment((0..n).map(|j| raw >> (n - 1 - j) & 1 == 1).collect());
        if evaluate(formula, &assignment, semantics).expect("assignment is total") {
            return Ok(Some(assignment));
        }
    }
    Ok(None)
}
