use std::collections::HashMap;
use std::fmt::Write as _;

use super::lexer::{tokenize, Tok};
use crate::error::{Error, Result};
use crate::semantics::KripkeModel;
use crate::syntax::{Atom, Context};

/// Writes `world w0 {p, q}` lines followed by `edge w0 -s-> w1` lines.
pub fn write_model(ctx: &Context, m: &KripkeModel) -> String {
    let mut out = String::new();
    for x in 0..m.size() {
        let props: Vec<&str> = ctx.props().filter(|&p| m.holds(p, x)).map(|p| ctx.prop_name(p)).collect();
        let _ = writeln!(out, "world w{x} {{{}}}", props.join(", "));
    }
    for a in 0..m.num_atoms() {
        let a = Atom(a as u32);
        for (x, y) in m.relation(a).pairs() {
            let _ = writeln!(out, "edge w{x} -{}-> w{y}", ctx.atom_name(a));
        }
    }
    out
}

/// Reads the format of [`write_model`]. World names are arbitrary
/// identifiers, numbered in order of declaration.
pub fn read_model(ctx: &mut Context, text: &str) -> Result<KripkeModel> {
    let toks = tokenize(text)?;
    let mut worlds: HashMap<String, usize> = HashMap::new();
    let mut props: Vec<(usize, String)> = Vec::new();
    let mut edges: Vec<(String, String, String, usize, usize)> = Vec::new();
    let mut i = 0;
    let err = |i: usize, msg: &str| -> Error {
        Error::Parse { line: toks[i].line, column: toks[i].column, message: msg.to_owned() }
    };
    let ident = |i: usize| -> Result<String> {
        match &toks[i].tok {
            Tok::Ident(s) => Ok(s.clone()),
            _ => Err(err(i, "expected an identifier")),
        }
    };
    let sym = |i: usize, s: &str| -> Result<()> {
        if toks[i].tok
            == Tok::Sym(match s {
                "{" => "{",
                "}" => "}",
                "-" => "-",
                "->" => "->",
                _ => ",",
            })
        {
            Ok(())
        } else {
            Err(err(i, &format!("expected '{s}'")))
        }
    };
    while toks[i].tok != Tok::Eof {
        match ident(i)?.as_str() {
            "world" => {
                let name = ident(i + 1)?;
                let x = worlds.len();
                if worlds.insert(name, x).is_some() {
                    return Err(err(i + 1, "duplicate world"));
                }
                sym(i + 2, "{")?;
                i += 3;
                while toks[i].tok != Tok::Sym("}") {
                    props.push((x, ident(i)?));
                    i += 1;
                    if toks[i].tok == Tok::Sym(",") {
                        i += 1;
                    }
                }
                i += 1;
            }
            "edge" => {
                let from = ident(i + 1)?;
                sym(i + 2, "-")?;
                let atom = ident(i + 3)?;
                sym(i + 4, "->")?;
                let to = ident(i + 5)?;
                edges.push((from, atom, to, toks[i].line, toks[i].column));
                i += 6;
            }
            _ => return Err(err(i, "expected 'world' or 'edge'")),
        }
    }
    let mut m = KripkeModel::new(worlds.len());
    for (x, p) in props {
        let p = ctx.prop(&p);
        m.set_prop(p, x);
    }
    for (from, atom, to, line, column) in edges {
        let (Some(&x), Some(&y)) = (worlds.get(&from), worlds.get(&to)) else {
            return Err(Error::Parse { line, column, message: "edge between undeclared worlds".into() });
        };
        let a = ctx.atom(&atom);
        m.add_edge(a, x, y);
    }
    Ok(m)
}
