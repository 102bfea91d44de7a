//! Parser for the subset of the DOT language used by graph exports:
//!
//! ```text
//! graph     := ("strict")? ("graph" | "digraph") id? "{" stmt* "}"
//! stmt      := (attr_stmt | edge_stmt | node_stmt | id "=" id) ";"?
//! attr_stmt := ("graph" | "node" | "edge") attr_list
//! edge_stmt := id ("->" id)+ attr_list?
//! node_stmt := id attr_list?
//! attr_list := "[" (id "=" id (","|";")?)* "]"
//! ```

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Eq,
    Arrow,
}

#[derive(Debug, Default)]
pub struct Graph {
    pub directed: bool,
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
}

fn lex(src: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '{' => (out.push(Tok::LBrace), i += 1).1,
            '}' => (out.push(Tok::RBrace), i += 1).1,
            '[' => (out.push(Tok::LBracket), i += 1).1,
            ']' => (out.push(Tok::RBracket), i += 1).1,
            ';' => (out.push(Tok::Semi), i += 1).1,
            ',' => (out.push(Tok::Comma), i += 1).1,
            '=' => (out.push(Tok::Eq), i += 1).1,
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Tok::Arrow);
                i += 2;
            }
            '"' => {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err("unterminated string".into()),
                        Some('"') => break,
                        Some('\\') if chars.get(i + 1) == Some(&'"') => {
                            s.push('"');
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push(Tok::Id(s));
            }
            c if c.is_alphanumeric() || c == '_' || c == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '.') {
                    i += 1;
                }
                let id: String = chars[start..i].iter().collect();
                let numeral = id.chars().all(|c| c.is_ascii_digit() || c == '.');
                let plain = id.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_');
                if !numeral && !plain {
                    return Err(format!("bad identifier {id:?}"));
                }
                out.push(Tok::Id(id));
            }
            other => return Err(format!("unexpected character {other:?}")),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<(), String> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(format!("expected {t:?}, got {got:?}")),
        }
    }

    fn id(&mut self) -> Result<String, String> {
        match self.next() {
            Some(Tok::Id(s)) => Ok(s),
            got => Err(format!("expected identifier, got {got:?}")),
        }
    }

    fn attr_list(&mut self) -> Result<BTreeMap<String, String>, String> {
        let mut attrs = BTreeMap::new();
        self.expect(Tok::LBracket)?;
        loop {
            match self.peek() {
                Some(Tok::RBracket) => {
                    self.pos += 1;
                    return Ok(attrs);
                }
                Some(Tok::Id(_)) => {
                    let k = self.id()?;
                    self.expect(Tok::Eq)?;
                    let v = self.id()?;
                    attrs.insert(k, v);
                    if matches!(self.peek(), Some(Tok::Comma | Tok::Semi)) {
                        self.pos += 1;
                    }
                }
                got => return Err(format!("bad attribute list at {got:?}")),
            }
        }
    }

    fn graph(&mut self) -> Result<Graph, String> {
        let mut g = Graph::default();
        let mut kw = self.id()?;
        if kw == "strict" {
            kw = self.id()?;
        }
        g.directed = match kw.as_str() {
            "digraph" => true,
            "graph" => false,
            _ => return Err(format!("expected graph keyword, got {kw}")),
        };
        if matches!(self.peek(), Some(Tok::Id(_))) {
            self.id()?;
        }
        self.expect(Tok::LBrace)?;
        loop {
            match self.peek() {
                Some(Tok::RBrace) => {
                    self.pos += 1;
                    break;
                }
                Some(Tok::Semi) => self.pos += 1,
                Some(Tok::Id(_)) => self.stmt(&mut g)?,
                got => return Err(format!("unexpected {got:?} in statement list")),
            }
        }
        if self.pos != self.toks.len() {
            return Err("trailing tokens after graph".into());
        }
        Ok(g)
    }

    fn stmt(&mut self, g: &mut Graph) -> Result<(), String> {
        let first = self.id()?;
        if matches!(first.as_str(), "graph" | "node" | "edge") {
            self.attr_list()?;
            return Ok(());
        }
        match self.peek() {
            Some(Tok::Eq) => {
                self.pos += 1;
                self.id()?;
            }
            Some(Tok::Arrow) => {
                if !g.directed {
                    return Err("'->' in an undirected graph".into());
                }
                let mut chain = vec![first];
                while self.peek() == Some(&Tok::Arrow) {
                    self.pos += 1;
                    chain.push(self.id()?);
                }
                let attrs = if self.peek() == Some(&Tok::LBracket) {
                    self.attr_list()?
                } else {
                    BTreeMap::new()
                };
                for w in chain.windows(2) {
                    g.nodes.entry(w[0].clone()).or_default();
                    g.nodes.entry(w[1].clone()).or_default();
                    g.edges.push((w[0].clone(), w[1].clone(), attrs.clone()));
                }
            }
            _ => {
                let attrs = if self.peek() == Some(&Tok::LBracket) {
                    self.attr_list()?
                } else {
                    BTreeMap::new()
                };
                g.nodes.entry(first).or_default().extend(attrs);
            }
        }
        if self.peek() == Some(&Tok::Semi) {
            self.pos += 1;
        }
        Ok(())
    }
}

pub fn parse(src: &str) -> Result<Graph, String> {
    let toks = lex(src)?;
    Parser { toks, pos: 0 }.graph()
}

