//! Text formats.
//!
//! Systems (`.xps`):
//!
//! ```text
//! system 2
//! # comment
//! eq X1 ^ Y1^2 = X2
//! edge 1 2 : 0 1
//! ```
//!
//! `eq` lines use monomial sugar (`1` is the empty monomial, repeated
//! factors add up); `edge` lines give the raw coefficient row. Matrices
//! (`.mat`) are whitespace-separated integer rows with an optional
//! `cols N` directive, required when there are no rows. Colourings are
//! one-line specs such as `mod:5` or `radop-nu:3`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use thiserror::Error;

use crate::eqsys::{Edge, ExpSystem};
use crate::rado::IntMatrix;
use crate::search::{Colour, ColouringSpec};

/// 1-based location of the offending token.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        Self { line, column, message: message.into() }
    }
}

type PResult<T> = std::result::Result<T, ParseError>;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    column: usize,
}

/// Lines with comments removed, paired with their 1-based numbers. Blank
/// lines are skipped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.split('\n').enumerate().filter_map(|(i, raw)| {
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let body = raw.split('#').next().unwrap_or("");
        (!body.trim().is_empty()).then_some((i + 1, body))
    })
}

fn tokenize(line: usize, body: &str) -> PResult<Vec<Token>> {
    let chars: Vec<char> = body.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Word(chars[start..i].iter().collect()), column });
        } else if c.is_ascii_digit() || ((c == '-' || c == '+') && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            i += 1;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Token { tok: Tok::Int(chars[start..i].iter().collect()), column });
        } else if "^*=:".contains(c) {
            out.push(Token { tok: Tok::Sym(c), column });
            i += 1;
        } else {
            return Err(ParseError::new(line, column, format!("unexpected character {c:?}")));
        }
    }
    Ok(out)
}

struct Cursor {
    line: usize,
    toks: Vec<Token>,
    pos: usize,
    end_column: usize,
}

impl Cursor {
    fn new(line: usize, body: &str) -> PResult<Self> {
        Ok(Self { line, toks: tokenize(line, body)?, pos: 0, end_column: body.chars().count() + 1 })
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.column)
    }

    fn err<T>(&self, message: impl Into<String>) -> PResult<T> {
        Err(ParseError::new(self.line, self.column(), message))
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn next(&mut self, what: &str) -> PResult<Tok> {
        match self.toks.get(self.pos) {
            Some(t) => {
                self.pos += 1;
                Ok(t.tok.clone())
            }
            None => self.err(format!("expected {what}, found end of line")),
        }
    }

    fn sym(&mut self, c: char) -> PResult<()> {
        match self.peek() {
            Some(Tok::Sym(s)) if *s == c => {
                self.pos += 1;
                Ok(())
            }
            _ => self.err(format!("expected '{c}'")),
        }
    }

    fn int(&mut self, what: &str) -> PResult<i64> {
        let column = self.column();
        match self.next(what)? {
            Tok::Int(s) => s
                .parse()
                .map_err(|_| ParseError::new(self.line, column, format!("{what} {s} out of range"))),
            _ => Err(ParseError::new(self.line, column, format!("expected {what}"))),
        }
    }

    /// A 1-based index in `1..=n`, returned 0-based.
    fn index(&mut self, what: &str, n: usize) -> PResult<usize> {
        let column = self.column();
        let v = self.int(what)?;
        if v < 1 || v as u64 > n as u64 {
            return Err(ParseError::new(self.line, column, format!("{what} {v} out of range 1..={n}")));
        }
        Ok(v as usize - 1)
    }

    /// `X<i>` or `Y<i>`, returned 0-based.
    fn var(&mut self, prefix: char, n: usize) -> PResult<usize> {
        let column = self.column();
        let Tok::Word(w) = self.next(&format!("{prefix} variable"))? else {
            return Err(ParseError::new(self.line, column, format!("expected {prefix} variable")));
        };
        let digits = w.strip_prefix(prefix).filter(|d| !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()));
        let Some(digits) = digits else {
            return Err(ParseError::new(self.line, column, format!("expected {prefix} variable, found {w}")));
        };
        match digits.parse::<usize>() {
            Ok(i) if (1..=n).contains(&i) => Ok(i - 1),
            _ => Err(ParseError::new(self.line, column, format!("index {w} out of range 1..={n}"))),
        }
    }

    fn done(&self) -> PResult<()> {
        if self.pos < self.toks.len() {
            return self.err("unexpected trailing input");
        }
        Ok(())
    }
}

fn monomial(cur: &mut Cursor, n: usize) -> PResult<Vec<i64>> {
    let mut coeffs = vec![0i64; n];
    if cur.peek() == Some(&Tok::Int("1".into())) {
        cur.pos += 1;
        return Ok(coeffs);
    }
    loop {
        let k = cur.var('Y', n)?;
        let e = if cur.peek() == Some(&Tok::Sym('^')) {
            cur.pos += 1;
            cur.int("exponent")?
        } else {
            1
        };
        coeffs[k] = match coeffs[k].checked_add(e) {
            Some(v) => v,
            None => return cur.err("exponent overflow"),
        };
        if cur.peek() != Some(&Tok::Sym('*')) {
            return Ok(coeffs);
        }
        cur.pos += 1;
    }
}

pub fn parse_system(text: &str) -> PResult<ExpSystem> {
    let mut it = lines(text);
    let Some((line, body)) = it.next() else {
        return Err(ParseError::new(1, 1, "missing 'system N' header"));
    };
    let mut cur = Cursor::new(line, body)?;
    if cur.peek() != Some(&Tok::Word("system".into())) {
        return cur.err("expected 'system N' header");
    }
    cur.pos += 1;
    let column = cur.column();
    let n = cur.int("variable count")?;
    if !(1..=1 << 20).contains(&n) {
        return Err(ParseError::new(line, column, format!("variable count {n} out of range 1..={}", 1 << 20)));
    }
    let n = n as usize;
    cur.done()?;

    let mut edges = Vec::new();
    for (line, body) in it {
        let mut cur = Cursor::new(line, body)?;
        match cur.next("statement")? {
            Tok::Word(w) if w == "eq" => {
                let tail = cur.var('X', n)?;
                cur.sym('^')?;
                let coeffs = monomial(&mut cur, n)?;
                cur.sym('=')?;
                let head = cur.var('X', n)?;
                cur.done()?;
                edges.push(Edge::new(tail, head, coeffs));
            }
            Tok::Word(w) if w == "edge" => {
                let tail = cur.index("tail", n)?;
                let head = cur.index("head", n)?;
                cur.sym(':')?;
                let coeffs = (0..n).map(|_| cur.int("coefficient")).collect::<PResult<Vec<_>>>()?;
                cur.done()?;
                edges.push(Edge::new(tail, head, coeffs));
            }
            _ => {
                cur.pos -= 1;
                return cur.err("expected 'eq' or 'edge'");
            }
        }
    }
    Ok(ExpSystem::new(n, edges))
}

fn print_monomial(out: &mut String, coeffs: &[i64]) {
    let mut first = true;
    for (k, &c) in coeffs.iter().enumerate().filter(|(_, &c)| c != 0) {
        if !first {
            out.push('*');
        }
        first = false;
        let _ = write!(out, "Y{}", k + 1);
        if c != 1 {
            let _ = write!(out, "^{c}");
        }
    }
    if first {
        out.push('1');
    }
}

/// Canonical form: one `eq` line per edge. Systems with `num_x != num_y`
/// have no textual form; the larger count is used for the header.
pub fn print_system(sys: &ExpSystem) -> String {
    let mut out = format!("system {}\n", sys.num_x.max(sys.num_y));
    for e in &sys.edges {
        let _ = write!(out, "eq X{} ^ ", e.tail + 1);
        print_monomial(&mut out, &e.coeffs);
        let _ = writeln!(out, " = X{}", e.head + 1);
    }
    out
}

pub fn parse_matrix(text: &str) -> PResult<IntMatrix> {
    let mut cols: Option<(usize, usize)> = None;
    let mut rows: Vec<Vec<BigInt>> = Vec::new();
    for (line, body) in lines(text) {
        let mut cur = Cursor::new(line, body)?;
        if cur.peek() == Some(&Tok::Word("cols".into())) {
            if cols.is_some() || !rows.is_empty() {
                return cur.err("'cols' must come first and only once");
            }
            cur.pos += 1;
            let column = cur.column();
            let n = cur.int("column count")?;
            if !(1..=1 << 20).contains(&n) {
                return Err(ParseError::new(line, column, format!("column count {n} out of range")));
            }
            cur.done()?;
            cols = Some((n as usize, line));
            continue;
        }
        let mut row = Vec::new();
        while cur.peek().is_some() {
            let column = cur.column();
            match cur.next("entry")? {
                Tok::Int(s) => row.push(s.parse::<BigInt>().expect("lexer yields integers")),
                _ => return Err(ParseError::new(line, column, "expected integer entry")),
            }
        }
        let expected = cols.map(|c| c.0).or(rows.first().map(Vec::len));
        if let Some(n) = expected {
            if row.len() != n {
                return Err(ParseError::new(line, 1, format!("row has {} entries, expected {n}", row.len())));
            }
        }
        rows.push(row);
    }
    let n = match (cols, rows.first()) {
        (Some((n, _)), _) => n,
        (None, Some(r)) => r.len(),
        (None, None) => return Err(ParseError::new(1, 1, "matrix without rows needs a 'cols N' directive")),
    };
    Ok(IntMatrix::new(n, rows).expect("row lengths checked"))
}

pub fn print_matrix(m: &IntMatrix) -> String {
    if m.nrows() == 0 {
        return format!("cols {}\n", m.cols());
    }
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

/// Parses a colouring spec, reading `table:<path>` files from disk.
pub fn parse_colouring(text: &str) -> PResult<ColouringSpec> {
    parse_colouring_with(text, &|path| std::fs::read_to_string(path).map_err(|e| e.to_string()))
}

/// As [`parse_colouring`], with a caller-supplied file loader.
///
/// Table bodies (inline after `table-inline:` or as file contents) list
/// colours for `1, 2, ...` separated by commas or whitespace, optionally
/// followed by `;default=D` (default `0`).
pub fn parse_colouring_with(
    text: &str,
    load: &dyn Fn(&str) -> std::result::Result<String, String>,
) -> PResult<ColouringSpec> {
    let text = text.trim();
    let err = |column: usize, m: String| ParseError::new(1, column, m);
    let Some((kind, arg)) = text.split_once(':') else {
        return Err(err(1, format!("expected KIND:ARG, found {text:?}")));
    };
    let at = kind.chars().count() + 2;
    let number = |s: &str| -> PResult<u64> {
        s.trim().parse::<u64>().map_err(|_| err(at, format!("expected a non-negative integer, found {s:?}")))
    };
    let domain = |e: crate::error::Error| err(at, e.to_string());
    match kind {
        "const" => Ok(ColouringSpec::constant(number(arg)?)),
        "mod" => ColouringSpec::modulo(number(arg)?).map_err(domain),
        "radop" => ColouringSpec::rado(number(arg)?).map_err(domain),
        "radop-nu" => ColouringSpec::rado_nu(number(arg)?).map_err(domain),
        "nu" => parse_colouring_with(arg, load)
            .map(ColouringSpec::compose_nu)
            .map_err(|e| err(at + e.column - 1, e.message)),
        "table-inline" => parse_table(arg).map_err(|m| err(at, m)),
        "table" => {
            let body = load(arg).map_err(|m| err(at, format!("cannot read {arg}: {m}")))?;
            parse_table(&body).map_err(|m| err(at, format!("{arg}: {m}")))
        }
        _ => Err(err(1, format!("unknown colouring kind {kind:?}"))),
    }
}

fn parse_table(body: &str) -> std::result::Result<ColouringSpec, String> {
    let (list, default) = match body.split_once(';') {
        Some((list, tail)) => {
            let d = tail
                .trim()
                .strip_prefix("default=")
                .ok_or_else(|| format!("expected default=D after ';', found {tail:?}"))?;
            (list, d.trim().parse::<Colour>().map_err(|_| format!("bad default colour {d:?}"))?)
        }
        None => (body, 0),
    };
    let colours = list
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<Colour>().map_err(|_| format!("bad colour {s:?}")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(ColouringSpec::table(colours, default))
}

pub fn print_colouring(spec: &ColouringSpec) -> String {
    match spec {
        ColouringSpec::Constant { colour } => format!("const:{colour}"),
        ColouringSpec::Mod { m } => format!("mod:{m}"),
        ColouringSpec::RadoP { p } => format!("radop:{p}"),
        ColouringSpec::RadoPNu { p } => format!("radop-nu:{p}"),
        ColouringSpec::Nu { inner } => format!("nu:{}", print_colouring(inner)),
        ColouringSpec::Table { colours, default } => {
            let list: Vec<String> = colours.iter().map(ToString::to_string).collect();
            format!("table-inline:{};default={default}", list.join(","))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn system_examples() {
        let pr = parse_system("system 4\neq X1 ^ Y1*Y2 = X3\neq X2 ^ Y3*Y4 = X3").unwrap();
        assert_eq!(
            pr.edges,
            vec![Edge::new(0, 2, vec![1, 1, 0, 0]), Edge::new(1, 2, vec![0, 0, 1, 1])]
        );
        let npr = parse_system("system 2\neq X1 ^ Y1^2 = X2\neq X1 ^ Y2 = X2").unwrap();
        assert_eq!(npr.edges, vec![Edge::new(0, 1, vec![2, 0]), Edge::new(0, 1, vec![0, 1])]);
        let lp = parse_system("system 1\neq X1 ^ 1 = X1").unwrap();
        assert_eq!(lp.edges, vec![Edge::new(0, 0, vec![0])]);
    }

    #[test]
    fn edges_comments_and_crlf() {
        let s = parse_system("# header next\r\nsystem 2\r\nedge 1 2 : 3 -1  # raw\r\n\r\neq X2 ^ Y1*Y1 = X1\r\n").unwrap();
        assert_eq!(s.edges, vec![Edge::new(0, 1, vec![3, -1]), Edge::new(1, 0, vec![2, 0])]);
        assert_eq!(print_system(&s), "system 2\neq X1 ^ Y1^3*Y2^-1 = X2\neq X2 ^ Y1^2 = X1\n");
    }

    #[test]
    fn repeated_factors_sum() {
        let a = parse_system("system 1\neq X1 ^ Y1*Y1 = X1").unwrap();
        let b = parse_system("system 1\neq X1 ^ Y1^2 = X1").unwrap();
        assert_eq!(a, b);
        let c = parse_system("system 1\neq X1 ^ Y1^3*Y1^-3 = X1").unwrap();
        assert_eq!(print_system(&c), "system 1\neq X1 ^ 1 = X1\n");
    }

    #[test]
    fn error_locations() {
        let e = parse_system("system 2\neq X1 ^ Y3 = X2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 9));
        assert!(e.message.contains("out of range"));
        let e = parse_system("system 2\neq X1 Y1 = X2").unwrap_err();
        assert_eq!((e.line, e.column), (2, 7));
        let e = parse_system("system 2\nedge 1 2 : 1").unwrap_err();
        assert_eq!((e.line, e.column), (2, 13));
        let e = parse_system("").unwrap_err();
        assert_eq!(e.line, 1);
        let e = parse_system("system 0").unwrap_err();
        assert_eq!((e.line, e.column), (1, 8));
        let e = parse_system("system 1\nfoo").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        let e = parse_system("system 1\neq X1 ^ Y1 = X1 $").unwrap_err();
        assert_eq!((e.line, e.column), (2, 17));
    }

    #[test]
    fn matrices() {
        let m = parse_matrix("1 1 -1").unwrap();
        assert_eq!(m, IntMatrix::from_rows(3, &[[1, 1, -1]]).unwrap());
        assert_eq!(print_matrix(&m), "1 1 -1\n");
        let e = parse_matrix("cols 3\n").unwrap();
        assert_eq!((e.nrows(), e.cols()), (0, 3));
        assert_eq!(print_matrix(&e), "cols 3\n");
        assert!(parse_matrix("").is_err());
        let err = parse_matrix("1 2\n3").unwrap_err();
        assert_eq!(err.line, 2);
        let big = parse_matrix("123456789012345678901234567890 -1").unwrap();
        assert_eq!(print_matrix(&big), "123456789012345678901234567890 -1\n");
    }

    #[test]
    fn colourings() {
        assert_eq!(parse_colouring("radop-nu:3").unwrap(), ColouringSpec::RadoPNu { p: 3 });
        assert_eq!(parse_colouring("mod:5").unwrap(), ColouringSpec::Mod { m: 5 });
        assert!(parse_colouring("mod:0").is_err());
        assert!(parse_colouring("radop:4").is_err());
        assert!(parse_colouring("bogus").is_err());
        let nested = parse_colouring("nu:mod:4").unwrap();
        assert_eq!(nested, ColouringSpec::compose_nu(ColouringSpec::Mod { m: 4 }));
        let t = parse_colouring("table-inline:1,2,1;default=7").unwrap();
        assert_eq!(t, ColouringSpec::table(vec![1, 2, 1], 7));
        let loaded = parse_colouring_with("table:t.txt", &|_| Ok("0 1\n1\n".into())).unwrap();
        assert_eq!(loaded, ColouringSpec::table(vec![0, 1, 1], 0));
        assert!(parse_colouring_with("table:missing", &|_| Err("nope".into())).is_err());
        for spec in [nested, t, ColouringSpec::constant(3), ColouringSpec::RadoP { p: 5 }] {
            assert_eq!(parse_colouring(&print_colouring(&spec)).unwrap(), spec);
        }
    }

    fn arb_system() -> impl Strategy<Value = ExpSystem> {
        (1usize..=5).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n, proptest::collection::vec(-3i64..=3, n)), 0..=6)
                .prop_map(move |es| ExpSystem::new(n, es.into_iter().map(|(t, h, c)| Edge::new(t, h, c)).collect()))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn system_round_trip(sys in arb_system()) {
            let text = print_system(&sys);
            prop_assert_eq!(parse_system(&text).unwrap(), sys);
            prop_assert!(text.lines().all(|l| !l.ends_with(' ')));
        }

        #[test]
        fn matrix_round_trip(rows in proptest::collection::vec(proptest::collection::vec(-50i64..50, 3), 0..4)) {
            let m = IntMatrix::from_rows(3, &rows).unwrap();
            prop_assert_eq!(parse_matrix(&print_matrix(&m)).unwrap(), m);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,60}") {
            let _ = parse_system(&s);
            let _ = parse_system(&format!("system 3\n{s}"));
            let _ = parse_matrix(&s);
            let _ = parse_colouring_with(&s, &|_| Err("no files".into()));
        }

        #[test]
        fn structured_fuzz_never_panics(parts in proptest::collection::vec(
            prop_oneof![
                Just("eq"), Just("edge"), Just("X1"), Just("Y2"), Just("^"), Just("*"),
                Just("="), Just(":"), Just("-1"), Just("1"), Just("99999999999999999999"),
                Just("\n"), Just("#"), Just("X0"), Just("Y"),
            ], 0..20)) {
            let _ = parse_system(&format!("system 2\n{}", parts.join(" ")));
        }
    }
}
