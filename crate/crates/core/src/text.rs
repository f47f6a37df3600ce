//! Line-oriented text formats for games and profiles.
//!
//! Games:
//!
//! ```text
//! game "entry deterrence"      # optional header
//! players 2
//! node n1 player 1 { In -> n2, Out -> t0 }
//! node n2 chance { 1/3 -> t1, 2/3 -> t2 }
//! terminal t0 payoffs [0, 2]
//! terminal t1 payoffs [1, -1]
//! terminal t2 payoffs [-1, 1]
//! root n1
//! ```
//!
//! Profiles, one decision node per line:
//!
//! ```text
//! at n1: In=1/2, Out=1/2
//! at n3: L
//! ```
//!
//! Node ids match `[A-Za-z0-9_]+`; action labels may also use `/ + . -`.
//! Rational literals are integers or fractions, never decimals.

use crate::game::{GameBuilder, GameError, GameTree, Node};
use crate::rational::{format_rational, parse_rational, Payoffs, Rational};
use crate::strategy::BehaviorProfile;
use num_traits::One;
use std::collections::HashMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "line {}, column {}: {}",
            self.line, self.column, self.message
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

impl Pos {
    fn error(self, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Str(String),
    Arrow,
    Punct(char),
    Newline,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Word(w) => write!(f, "`{w}`"),
            Tok::Str(s) => write!(f, "string \"{s}\""),
            Tok::Arrow => write!(f, "`->`"),
            Tok::Punct(c) => write!(f, "`{c}`"),
            Tok::Newline => write!(f, "end of line"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

fn is_word_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '/' | '+' | '.' | '-')
}

fn is_id(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let mut out = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let pos = Pos {
                line: ln + 1,
                column: i + 1,
            };
            let c = chars[i];
            if c == '#' {
                break;
            } else if c.is_whitespace() {
                i += 1;
            } else if c == '-' && chars.get(i + 1) == Some(&'>') {
                out.push((Tok::Arrow, pos));
                i += 2;
            } else if c == '"' {
                let mut s = String::new();
                i += 1;
                loop {
                    match chars.get(i) {
                        None => return Err(pos.error("unterminated string")),
                        Some('"') => break,
                        Some('\\') if matches!(chars.get(i + 1), Some('"' | '\\')) => {
                            s.push(chars[i + 1]);
                            i += 2;
                        }
                        Some(&ch) => {
                            s.push(ch);
                            i += 1;
                        }
                    }
                }
                i += 1;
                out.push((Tok::Str(s), pos));
            } else if is_word_char(c) {
                let start = i;
                while i < chars.len()
                    && is_word_char(chars[i])
                    && !(chars[i] == '-' && chars.get(i + 1) == Some(&'>'))
                {
                    i += 1;
                }
                out.push((Tok::Word(chars[start..i].iter().collect()), pos));
            } else if "{}[],:=".contains(c) {
                out.push((Tok::Punct(c), pos));
                i += 1;
            } else {
                return Err(pos.error(format!("unexpected character `{c}`")));
            }
        }
        out.push((
            Tok::Newline,
            Pos {
                line: ln + 1,
                column: chars.len() + 1,
            },
        ));
    }
    let end = out
        .last()
        .map(|(_, p)| *p)
        .unwrap_or(Pos { line: 1, column: 1 });
    out.push((Tok::Eof, end));
    Ok(out)
}

struct Cursor {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Cursor {
    fn peek(&self) -> &(Tok, Pos) {
        &self.toks[self.at]
    }

    fn next(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn skip_newlines(&mut self) {
        while self.peek().0 == Tok::Newline {
            self.next();
        }
    }

    fn word(&mut self, what: &str) -> Result<(String, Pos), ParseError> {
        match self.next() {
            (Tok::Word(w), p) => Ok((w, p)),
            (t, p) => Err(p.error(format!("expected {what}, found {t}"))),
        }
    }

    fn id(&mut self) -> Result<(String, Pos), ParseError> {
        let (w, p) = self.word("node id")?;
        if !is_id(&w) {
            return Err(p.error(format!("invalid node id `{w}`")));
        }
        Ok((w, p))
    }

    fn rational(&mut self) -> Result<(Rational, Pos), ParseError> {
        let (w, p) = self.word("rational literal")?;
        parse_rational(&w)
            .map(|r| (r, p))
            .map_err(|e| p.error(e.to_string()))
    }

    fn expect(&mut self, want: Tok) -> Result<Pos, ParseError> {
        let (t, p) = self.next();
        if t == want {
            Ok(p)
        } else {
            Err(p.error(format!("expected {want}, found {t}")))
        }
    }

    fn end_of_statement(&mut self) -> Result<(), ParseError> {
        match self.next() {
            (Tok::Newline | Tok::Eof, _) => Ok(()),
            (t, p) => Err(p.error(format!("expected end of line, found {t}"))),
        }
    }

    /// Comma-separated items inside `open ... close`, newlines allowed.
    fn list<T>(
        &mut self,
        open: char,
        close: char,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        self.expect(Tok::Punct(open))?;
        let mut items = Vec::new();
        self.skip_newlines();
        if self.peek().0 == Tok::Punct(close) {
            self.next();
            return Ok(items);
        }
        loop {
            self.skip_newlines();
            items.push(item(self)?);
            self.skip_newlines();
            match self.next() {
                (Tok::Punct(','), _) => continue,
                (Tok::Punct(c), _) if c == close => return Ok(items),
                (t, p) => return Err(p.error(format!("expected `,` or `{close}`, found {t}"))),
            }
        }
    }
}

enum Decl {
    Decision {
        owner: usize,
        actions: Vec<(String, Pos, String, Pos)>,
    },
    Chance {
        outcomes: Vec<(Rational, String, Pos)>,
    },
    Terminal {
        payoffs: Payoffs,
    },
}

/// Parses a game description. Errors carry the line and column of the offending token.
pub fn parse_game(text: &str) -> Result<GameTree, ParseError> {
    let mut cur = Cursor {
        toks: lex(text)?,
        at: 0,
    };
    let mut name: Option<String> = None;
    let mut players: Option<(usize, Pos)> = None;
    let mut root: Option<(String, Pos)> = None;
    let mut decls: Vec<(String, Pos, Decl)> = Vec::new();
    let mut seen: HashMap<String, Pos> = HashMap::new();

    loop {
        cur.skip_newlines();
        let (tok, pos) = cur.next();
        let keyword = match tok {
            Tok::Eof => break,
            Tok::Word(w) => w,
            t => return Err(pos.error(format!("expected a statement, found {t}"))),
        };
        match keyword.as_str() {
            "game" => {
                if name.is_some() {
                    return Err(pos.error("duplicate game header"));
                }
                match cur.next() {
                    (Tok::Str(s), _) => name = Some(s),
                    (t, p) => return Err(p.error(format!("expected quoted name, found {t}"))),
                }
            }
            "players" => {
                if players.is_some() {
                    return Err(pos.error("duplicate players declaration"));
                }
                let (w, p) = cur.word("player count")?;
                let n = w
                    .parse::<usize>()
                    .ok()
                    .filter(|n| *n >= 1)
                    .ok_or_else(|| p.error(format!("invalid player count `{w}`")))?;
                players = Some((n, p));
            }
            "root" => {
                if root.is_some() {
                    return Err(pos.error("duplicate root declaration"));
                }
                root = Some(cur.id()?);
            }
            "node" | "terminal" => {
                let (id, id_pos) = cur.id()?;
                if let Some(first) = seen.get(&id) {
                    return Err(id_pos.error(format!(
                        "duplicate node id `{id}` (first defined on line {})",
                        first.line
                    )));
                }
                seen.insert(id.clone(), id_pos);
                let decl = if keyword == "terminal" {
                    let (w, p) = cur.word("`payoffs`")?;
                    if w != "payoffs" {
                        return Err(p.error(format!("expected `payoffs`, found `{w}`")));
                    }
                    let values = cur.list('[', ']', |c| c.rational().map(|(r, _)| r))?;
                    Decl::Terminal {
                        payoffs: Payoffs(values),
                    }
                } else {
                    let (kind, p) = cur.word("`player` or `chance`")?;
                    match kind.as_str() {
                        "player" => {
                            let (w, p) = cur.word("player index")?;
                            let owner =
                                w.parse::<usize>().ok().filter(|n| *n >= 1).ok_or_else(|| {
                                    p.error(format!("invalid player index `{w}`"))
                                })?;
                            let actions = cur.list('{', '}', |c| {
                                let (label, lp) = c.word("action label")?;
                                c.expect(Tok::Arrow)?;
                                let (child, cp) = c.id()?;
                                Ok((label, lp, child, cp))
                            })?;
                            Decl::Decision { owner, actions }
                        }
                        "chance" => {
                            let outcomes = cur.list('{', '}', |c| {
                                let (prob, _) = c.rational()?;
                                c.expect(Tok::Arrow)?;
                                let (child, cp) = c.id()?;
                                Ok((prob, child, cp))
                            })?;
                            Decl::Chance { outcomes }
                        }
                        _ => {
                            return Err(
                                p.error(format!("expected `player` or `chance`, found `{kind}`"))
                            )
                        }
                    }
                };
                decls.push((id, id_pos, decl));
            }
            other => return Err(pos.error(format!("unknown statement `{other}`"))),
        }
        cur.end_of_statement()?;
    }

    let end = cur.peek().1;
    let (n, _) = players.ok_or_else(|| end.error("missing `players` declaration"))?;
    let (root_id, root_pos) = root.ok_or_else(|| end.error("missing `root` declaration"))?;
    if !seen.contains_key(&root_id) {
        return Err(root_pos.error(format!("unknown node reference `{root_id}`")));
    }

    let mut builder = GameBuilder::new(n);
    if let Some(name) = name {
        builder.name(name);
    }
    let unknown = |id: &str, p: Pos| p.error(format!("unknown node reference `{id}`"));
    for (id, pos, decl) in &decls {
        match decl {
            Decl::Decision { owner, actions } => {
                for (_, _, child, cp) in actions {
                    if !seen.contains_key(child) {
                        return Err(unknown(child, *cp));
                    }
                }
                builder
                    .decision(
                        id,
                        *owner,
                        actions.iter().map(|(l, _, c, _)| (l.clone(), c.clone())),
                    )
                    .map_err(|e| pos.error(e.to_string()))?;
            }
            Decl::Chance { outcomes } => {
                for (_, child, cp) in outcomes {
                    if !seen.contains_key(child) {
                        return Err(unknown(child, *cp));
                    }
                }
                let sum: Rational = outcomes.iter().map(|(p, _, _)| p.clone()).sum();
                if !outcomes.is_empty() && !sum.is_one() {
                    return Err(pos.error(format!(
                        "chance probabilities sum to {}, expected 1",
                        format_rational(&sum)
                    )));
                }
                builder
                    .chance(id, outcomes.iter().map(|(p, c, _)| (p.clone(), c.clone())))
                    .map_err(|e| pos.error(e.to_string()))?;
            }
            Decl::Terminal { payoffs } => {
                if payoffs.len() != n {
                    return Err(pos.error(format!(
                        "payoff arity mismatch: {} entries, expected {n}",
                        payoffs.len()
                    )));
                }
                builder
                    .terminal(id, payoffs.clone())
                    .map_err(|e| pos.error(e.to_string()))?;
            }
        }
    }
    builder.root(&root_id);
    match builder.build() {
        Ok(tree) => Ok(tree),
        Err(GameError::Invalid(report)) => {
            let issue = &report.issues[0];
            let pos = decls
                .iter()
                .find(|(id, _, _)| *id == issue.node_id)
                .map(|(_, p, _)| *p)
                .unwrap_or(root_pos);
            Err(pos.error(issue.kind.to_string()))
        }
        Err(e) => Err(root_pos.error(e.to_string())),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Canonical text of a game; `parse_game(&write_game(t)) == t` for every valid tree.
pub fn write_game(tree: &GameTree) -> String {
    let mut out = String::new();
    if let Some(name) = tree.name() {
        out.push_str(&format!("game \"{}\"\n", escape(name)));
    }
    out.push_str(&format!("players {}\n", tree.players()));
    for (id, node) in tree.nodes() {
        let name = tree.id(id);
        let line = match node {
            Node::Decision { owner, actions } => {
                let items: Vec<String> = actions
                    .iter()
                    .map(|a| format!("{} -> {}", a.label, tree.id(a.child)))
                    .collect();
                format!("node {name} player {owner} {{ {} }}", items.join(", "))
            }
            Node::Chance { outcomes } => {
                let items: Vec<String> = outcomes
                    .iter()
                    .map(|o| {
                        format!(
                            "{} -> {}",
                            format_rational(&o.probability),
                            tree.id(o.child)
                        )
                    })
                    .collect();
                format!("node {name} chance {{ {} }}", items.join(", "))
            }
            Node::Terminal { payoffs } => {
                let items: Vec<String> = payoffs.iter().map(format_rational).collect();
                format!("terminal {name} payoffs [{}]", items.join(", "))
            }
        };
        out.push_str(&line);
        out.push('\n');
    }
    out.push_str(&format!("root {}\n", tree.id(tree.root())));
    out
}

/// Parses a profile against `tree`. Completeness and normalization are left
/// to [`crate::strategy::validate_profile`].
pub fn parse_profile(tree: &GameTree, text: &str) -> Result<BehaviorProfile, ParseError> {
    let mut cur = Cursor {
        toks: lex(text)?,
        at: 0,
    };
    let mut profile = BehaviorProfile::new();
    loop {
        cur.skip_newlines();
        let (tok, pos) = cur.next();
        match tok {
            Tok::Eof => break,
            Tok::Word(w) if w == "at" => {}
            t => return Err(pos.error(format!("expected `at`, found {t}"))),
        }
        let (id, id_pos) = cur.id()?;
        let node = tree
            .find(&id)
            .ok_or_else(|| id_pos.error(format!("unknown node reference `{id}`")))?;
        if !matches!(tree.node(node), Node::Decision { .. }) {
            return Err(id_pos.error(format!("`{id}` is not a decision node")));
        }
        if profile.get(node).is_some() {
            return Err(id_pos.error(format!("node `{id}` assigned twice")));
        }
        cur.expect(Tok::Punct(':'))?;
        let mut dist = Vec::new();
        let mut bare = None;
        loop {
            let (label, lp) = cur.word("action label")?;
            let p = if cur.peek().0 == Tok::Punct('=') {
                cur.next();
                cur.rational()?.0
            } else {
                bare.get_or_insert(lp);
                Rational::one()
            };
            dist.push((label, p));
            match cur.next() {
                (Tok::Punct(','), _) => continue,
                (Tok::Newline | Tok::Eof, _) => break,
                (t, p) => return Err(p.error(format!("expected `,` or end of line, found {t}"))),
            }
        }
        if let Some(p) = bare.filter(|_| dist.len() > 1) {
            return Err(p.error("a bare label must be the only entry"));
        }
        profile.set(node, dist);
    }
    Ok(profile)
}

/// Profile text with one line per assigned decision node, in node order.
/// Point masses use the `at id: label` shorthand.
pub fn write_profile(tree: &GameTree, profile: &BehaviorProfile) -> String {
    let mut out = String::new();
    for (node, dist) in profile.iter() {
        let body = match dist {
            [(label, p)] if p.is_one() => label.clone(),
            _ => dist
                .iter()
                .map(|(l, p)| format!("{l}={}", format_rational(p)))
                .collect::<Vec<_>>()
                .join(", "),
        };
        out.push_str(&format!("at {}: {body}\n", tree.id(node)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::NodeId;
    use crate::rational::{int, ratio};

    #[test]
    fn single_terminal_game() {
        let tree = parse_game("players 2\nterminal t0 payoffs [1, 2]\nroot t0\n").unwrap();
        assert_eq!(tree.len(), 1);
        match tree.node(tree.root()) {
            Node::Terminal { payoffs } => assert_eq!(*payoffs, Payoffs::from_ints(&[1, 2])),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn thirds_are_exact() {
        let text = "players 1\nnode c chance { 1/3 -> a, 1/3 -> b, 1/3 -> d }\n\
                    terminal a payoffs [0]\nterminal b payoffs [1]\nterminal d payoffs [2]\nroot c\n";
        let tree = parse_game(text).unwrap();
        match tree.node(tree.root()) {
            Node::Chance { outcomes } => {
                assert!(outcomes.iter().all(|o| o.probability == ratio(1, 3)))
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn chance_sum_error() {
        let text = "players 1\nnode c chance { 1/3 -> a, 1/3 -> b }\n\
                    terminal a payoffs [0]\nterminal b payoffs [1]\nroot c\n";
        let err = parse_game(text).unwrap_err();
        assert_eq!(err.message, "chance probabilities sum to 2/3, expected 1");
        assert_eq!((err.line, err.column), (2, 6));
    }

    #[test]
    fn positioned_errors() {
        let err = parse_game("players 1\nterminal t payoffs [0.5]\nroot t\n").unwrap_err();
        assert_eq!((err.line, err.column), (2, 21));
        assert!(err.message.contains("decimal"));

        let err = parse_game("players 1\nnode r player 1 { L -> nope }\nroot r\n").unwrap_err();
        assert_eq!(err.message, "unknown node reference `nope`");
        assert_eq!((err.line, err.column), (2, 24));

        let err = parse_game("players 1\nterminal t payoffs [0]\nterminal t payoffs [1]\nroot t\n")
            .unwrap_err();
        assert!(err.message.starts_with("duplicate node id `t`"));
        assert_eq!(err.line, 3);

        let err = parse_game("players 2\nterminal t payoffs [0]\nroot t\n").unwrap_err();
        assert!(err.message.contains("arity"));

        let err = parse_game("players 1\nnode r player 1 { L -> t L -> t }\n").unwrap_err();
        assert_eq!(err.line, 2);

        let err = parse_game("players 1\nnode r player 1 { L -> t, L -> u }\nterminal t payoffs [0]\nterminal u payoffs [0]\nroot r\n")
            .unwrap_err();
        assert!(err.message.contains("duplicate action label"));
    }

    #[test]
    fn comments_header_and_multiline_blocks() {
        let text = "# sample\ngame \"say \\\"hi\\\"\"\nplayers 2 # two\nnode r player 2 {\n  L -> a,\n  R -> b\n}\n\
                    terminal a payoffs [-1/2, 3]\nterminal b payoffs [0, 0]\nroot r\n";
        let tree = parse_game(text).unwrap();
        assert_eq!(tree.name(), Some("say \"hi\""));
        assert_eq!(tree.owner(tree.root()), Some(2));
        let again = parse_game(&write_game(&tree)).unwrap();
        assert_eq!(again, tree);
    }

    #[test]
    fn profile_round_trip() {
        let tree = parse_game(
            "players 1\nnode r player 1 { L -> a, R -> b }\nterminal a payoffs [0]\nterminal b payoffs [0]\nroot r\n",
        )
        .unwrap();
        let f = parse_profile(&tree, "at r: L=1/2, R=1/2\n").unwrap();
        assert_eq!(f.get(NodeId(0)).unwrap()[1], ("R".to_string(), ratio(1, 2)));
        assert_eq!(parse_profile(&tree, &write_profile(&tree, &f)).unwrap(), f);

        let g = parse_profile(&tree, "# pure\nat r: R").unwrap();
        assert_eq!(g.get(NodeId(0)).unwrap(), &[("R".to_string(), int(1))]);
        assert_eq!(write_profile(&tree, &g), "at r: R\n");

        assert!(parse_profile(&tree, "at a: L").is_err());
        assert!(parse_profile(&tree, "at r: L\nat r: R").is_err());
        assert!(parse_profile(&tree, "at r: L, R").is_err());
        let err = parse_profile(&tree, "at zz: L").unwrap_err();
        assert_eq!((err.line, err.column), (1, 4));
    }
}
