//! JSON wire formats for signatures, algebras, congruences, recognizers,
//! and Boolean set algebras, plus line-oriented term and identity files.
//!
//! Operation tables are written as nested row-major arrays: a nullary
//! table is a bare integer, a unary table a flat array, a binary table an
//! array of rows (first argument selects the row), and so on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::algebra::{AlgebraError, FiniteAlgebra};
use crate::bitset::BitSet;
use crate::boole::{BooleError, SetBooleanAlgebra};
use crate::congruence::Congruence;
use crate::recognizer::Recognizer;
use crate::signature::{Signature, SignatureError, VariableSet};
use crate::term::{parse_polish, Term, TermError};
use crate::variety::Identity;

/// Errors from reading or writing the wire formats.
#[derive(Debug, Error)]
pub enum JsonError {
    /// Malformed JSON text.
    #[error(transparent)]
    Parse(#[from] serde_json::Error),
    /// Structurally valid JSON that does not match the expected shape.
    #[error("Schema: {0}")]
    Schema(String),
    /// A decoded object failed algebra-level validation.
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    /// A decoded signature failed validation.
    #[error(transparent)]
    Signature(#[from] SignatureError),
    /// A term or identity line failed to parse.
    #[error(transparent)]
    Term(#[from] TermError),
    /// A decoded Boolean set algebra failed validation.
    #[error(transparent)]
    Boole(#[from] BooleError),
}

#[derive(Serialize, Deserialize)]
struct SymbolWire {
    name: String,
    arity: usize,
}

#[derive(Serialize, Deserialize)]
struct SignatureWire {
    symbols: Vec<SymbolWire>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraWire {
    signature: SignatureWire,
    size: usize,
    tables: BTreeMap<String, Value>,
}

#[derive(Serialize, Deserialize)]
struct CongruenceWire {
    #[serde(rename = "classOf")]
    class_of: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RecognizerWire {
    algebra: AlgebraWire,
    assignment: BTreeMap<String, usize>,
    accepting: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct BooleanAlgebraWire {
    universe: usize,
    atoms: Vec<Vec<usize>>,
}

fn signature_wire(sig: &Signature) -> SignatureWire {
    SignatureWire {
        symbols: sig
            .symbols()
            .map(|(name, arity)| SymbolWire {
                name: name.to_string(),
                arity,
            })
            .collect(),
    }
}

fn signature_unwire(wire: SignatureWire) -> Result<Signature, JsonError> {
    Ok(Signature::new(
        wire.symbols.into_iter().map(|s| (s.name, s.arity)),
    )?)
}

/// Renders a signature as JSON text.
pub fn signature_to_json(sig: &Signature) -> String {
    serde_json::to_string_pretty(&signature_wire(sig)).expect("serializable")
}

/// Reads a signature from JSON text.
pub fn signature_from_json(text: &str) -> Result<Signature, JsonError> {
    signature_unwire(serde_json::from_str(text)?)
}

fn nest_table(table: &[usize], size: usize, arity: usize) -> Value {
    match arity {
        0 => serde_json::json!(table[0]),
        1 => serde_json::json!(table),
        _ => {
            let stride = table.len() / size;
            Value::Array(
                table
                    .chunks(stride)
                    .map(|chunk| nest_table(chunk, size, arity - 1))
                    .collect(),
            )
        }
    }
}

fn flatten_table(value: &Value, arity: usize, out: &mut Vec<usize>) -> Result<(), JsonError> {
    if arity == 0 {
        let n = value
            .as_u64()
            .ok_or_else(|| JsonError::Schema("table entries must be nonnegative integers".into()))?;
        out.push(n as usize);
        return Ok(());
    }
    let items = value
        .as_array()
        .ok_or_else(|| JsonError::Schema("tables nest as row-major arrays".into()))?;
    for item in items {
        flatten_table(item, arity - 1, out)?;
    }
    Ok(())
}

fn algebra_wire(algebra: &FiniteAlgebra) -> AlgebraWire {
    let tables = algebra
        .signature()
        .symbols()
        .map(|(name, arity)| {
            (
                name.to_string(),
                nest_table(algebra.table(name), algebra.size(), arity),
            )
        })
        .collect();
    AlgebraWire {
        signature: signature_wire(algebra.signature()),
        size: algebra.size(),
        tables,
    }
}

fn algebra_unwire(wire: AlgebraWire) -> Result<FiniteAlgebra, JsonError> {
    let sig = signature_unwire(wire.signature)?;
    let mut tables = BTreeMap::new();
    for (name, value) in wire.tables {
        let arity = sig
            .arity(&name)
            .ok_or(AlgebraError::UnexpectedTable(name.clone()))?;
        let mut flat = Vec::new();
        flatten_table(&value, arity, &mut flat)?;
        tables.insert(name, flat);
    }
    Ok(FiniteAlgebra::new(sig, wire.size, tables)?)
}

/// Renders an algebra as JSON text with nested row-major tables.
pub fn algebra_to_json(algebra: &FiniteAlgebra) -> String {
    serde_json::to_string_pretty(&algebra_wire(algebra)).expect("serializable")
}

/// Reads an algebra from JSON text, validating tables against the
/// embedded signature.
pub fn algebra_from_json(text: &str) -> Result<FiniteAlgebra, JsonError> {
    algebra_unwire(serde_json::from_str(text)?)
}

/// Renders a congruence as its class-index array.
pub fn congruence_to_json(theta: &Congruence) -> String {
    serde_json::to_string_pretty(&CongruenceWire {
        class_of: theta.class_of().to_vec(),
    })
    .expect("serializable")
}

/// Reads a congruence over a given algebra, revalidating compatibility.
pub fn congruence_from_json(
    text: &str,
    algebra: &FiniteAlgebra,
) -> Result<Congruence, JsonError> {
    let wire: CongruenceWire = serde_json::from_str(text)?;
    Ok(Congruence::new(algebra.clone(), wire.class_of)?)
}

/// Renders a recognizer (algebra, assignment, accepting set).
pub fn recognizer_to_json(recognizer: &Recognizer) -> String {
    serde_json::to_string_pretty(&RecognizerWire {
        algebra: algebra_wire(recognizer.algebra()),
        assignment: recognizer.assignment().clone(),
        accepting: recognizer.accepting().iter().copied().collect(),
    })
    .expect("serializable")
}

/// Reads a recognizer from JSON text.
pub fn recognizer_from_json(text: &str) -> Result<Recognizer, JsonError> {
    let wire: RecognizerWire = serde_json::from_str(text)?;
    let algebra = algebra_unwire(wire.algebra)?;
    Ok(Recognizer::new(
        algebra,
        wire.assignment,
        wire.accepting.into_iter().collect(),
    )?)
}

/// Renders a Boolean set algebra as its universe size and atom lists.
pub fn boolean_algebra_to_json(b: &SetBooleanAlgebra) -> String {
    serde_json::to_string_pretty(&BooleanAlgebraWire {
        universe: b.universe(),
        atoms: b.atoms().iter().map(|a| a.iter().collect()).collect(),
    })
    .expect("serializable")
}

/// Reads a Boolean set algebra from JSON text, revalidating the partition.
pub fn boolean_algebra_from_json(text: &str) -> Result<SetBooleanAlgebra, JsonError> {
    let wire: BooleanAlgebraWire = serde_json::from_str(text)?;
    for atom in &wire.atoms {
        if let Some(&p) = atom.iter().find(|&&p| p >= wire.universe) {
            return Err(JsonError::Schema(format!(
                "atom point {p} outside universe of size {}",
                wire.universe
            )));
        }
    }
    let atoms = wire
        .atoms
        .into_iter()
        .map(|points| BitSet::from_indices(wire.universe, points))
        .collect();
    Ok(SetBooleanAlgebra::new(wire.universe, atoms)?)
}

/// Parses a term file: one prefix word per line, blank lines skipped.
pub fn parse_term_file(
    text: &str,
    sig: &Signature,
    vars: &VariableSet,
) -> Result<Vec<Term>, JsonError> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(|line| Ok(parse_polish(line, sig, vars)?))
        .collect()
}

/// Parses an identity file: one `lhs = rhs` pair of prefix words per line,
/// blank lines skipped.
pub fn parse_identity_file(
    text: &str,
    sig: &Signature,
    vars: &VariableSet,
) -> Result<Vec<Identity>, JsonError> {
    text.lines()
        .map(str::trim)
        .filter(|line| !line.is_empty())
        .map(|line| Ok(Identity::parse(line, sig, vars)?))
        .collect()
}
