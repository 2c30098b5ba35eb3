//! Parser for words and for the line-oriented L-presentation file format.
//!
//! Word grammar:
//!
//! ```text
//! word     := factor (('*' | whitespace) factor)*
//! factor   := atom ('^' exponent)*
//! exponent := '-'? integer | atom
//! atom     := ident | '1' | '(' word ')' | '[' word ',' word ']'
//! ```
//!
//! `x^k` is a power, `x^w` for a word `w` is the conjugate `w⁻¹ x w`, and
//! `[u,v]` is `u⁻¹ v⁻¹ u v`.

use crate::error::{Error, Result};
use crate::presentations::{basilica, burnside, grigorchuk, LPresentation, SubgroupSpec};
use crate::words::{Alphabet, FreeEndomorphism, Letter, Word};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Ident(String),
    Int(i64),
    Star,
    Caret,
    Minus,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Space,
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Ident(name) => write!(f, "`{name}`"),
            Token::Int(n) => write!(f, "`{n}`"),
            Token::Star => f.write_str("`*`"),
            Token::Caret => f.write_str("`^`"),
            Token::Minus => f.write_str("`-`"),
            Token::LParen => f.write_str("`(`"),
            Token::RParen => f.write_str("`)`"),
            Token::LBracket => f.write_str("`[`"),
            Token::RBracket => f.write_str("`]`"),
            Token::Comma => f.write_str("`,`"),
            Token::Space => f.write_str("whitespace"),
        }
    }
}

fn describe(t: Option<&Token>) -> String {
    t.map_or_else(|| "end of input".to_string(), Token::to_string)
}

fn tokenize(s: &str) -> std::result::Result<Vec<Token>, String> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            while i < chars.len() && chars[i].is_whitespace() {
                i += 1;
            }
            out.push(Token::Space);
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let text: String = chars[start..i].iter().collect();
            out.push(Token::Int(text.parse().map_err(|_| format!("integer `{text}` too large"))?));
            continue;
        }
        out.push(match c {
            '*' => Token::Star,
            '^' => Token::Caret,
            '-' => Token::Minus,
            '(' => Token::LParen,
            ')' => Token::RParen,
            '[' => Token::LBracket,
            ']' => Token::RBracket,
            ',' => Token::Comma,
            other => return Err(format!("unexpected character `{other}`")),
        });
        i += 1;
    }
    Ok(out)
}

struct WordParser<'a> {
    tokens: Vec<Token>,
    pos: usize,
    alphabet: &'a Alphabet,
}

impl<'a> WordParser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn skip_space(&mut self) {
        while self.peek() == Some(&Token::Space) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, t: Token) -> std::result::Result<(), String> {
        self.skip_space();
        if self.peek() == Some(&t) {
            self.pos += 1;
            Ok(())
        } else {
            Err(format!("expected {t}, found {}", describe(self.peek())))
        }
    }

    fn starts_atom(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(_) | Token::Int(1) | Token::LParen | Token::LBracket))
    }

    fn word(&mut self) -> std::result::Result<Word, String> {
        self.skip_space();
        let mut w = self.factor()?;
        loop {
            let save = self.pos;
            self.skip_space();
            if self.peek() == Some(&Token::Star) {
                self.pos += 1;
                self.skip_space();
                w = w.multiply(&self.factor()?);
            } else if self.starts_atom() {
                // juxtaposition, with or without whitespace
                w = w.multiply(&self.factor()?);
            } else {
                self.pos = save;
                return Ok(w);
            }
        }
    }

    fn factor(&mut self) -> std::result::Result<Word, String> {
        let mut base = self.atom()?;
        while self.peek() == Some(&Token::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Token::Minus) => {
                    self.pos += 1;
                    match self.peek().cloned() {
                        Some(Token::Int(k)) => {
                            self.pos += 1;
                            base = base.pow(-k);
                        }
                        other => {
                            return Err(format!("expected integer after `^-`, found {}", describe(other.as_ref())))
                        }
                    }
                }
                Some(Token::Int(k)) => {
                    self.pos += 1;
                    base = base.pow(k);
                }
                _ => {
                    let by = self.atom()?;
                    base = base.conjugate(&by);
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> std::result::Result<Word, String> {
        match self.peek().cloned() {
            Some(Token::Ident(name)) => {
                self.pos += 1;
                let i = self.alphabet.index_of(&name).ok_or_else(|| format!("unknown generator `{name}`"))?;
                Ok(Word::letter(Letter::generator(i)))
            }
            Some(Token::Int(1)) => {
                self.pos += 1;
                Ok(Word::identity())
            }
            Some(Token::LParen) => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(Token::RParen)?;
                Ok(w)
            }
            Some(Token::LBracket) => {
                self.pos += 1;
                let u = self.word()?;
                self.expect(Token::Comma)?;
                let v = self.word()?;
                self.expect(Token::RBracket)?;
                Ok(Word::commutator(&u, &v))
            }
            other => Err(format!("expected a generator, `1`, `(` or `[`, found {}", describe(other.as_ref()))),
        }
    }
}

/// Parses a single word over the alphabet.
pub fn parse_word(s: &str, alphabet: &Alphabet) -> Result<Word> {
    parse_word_inner(s, alphabet).map_err(|m| Error::parse(1, m))
}

fn parse_word_inner(s: &str, alphabet: &Alphabet) -> std::result::Result<Word, String> {
    let tokens = tokenize(s)?;
    let mut p = WordParser { tokens, pos: 0, alphabet };
    let w = p.word()?;
    p.skip_space();
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input after word: {:?}", &p.tokens[p.pos..]));
    }
    Ok(w)
}

/// Splits at depth-zero occurrences of `sep`.
fn split_top_level(s: &str, is_sep: impl Fn(char) -> bool) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if depth == 0 && is_sep(c) => {
                out.push(&s[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

/// Parses a list of words. Items are separated by top-level commas when any
/// are present (whitespace inside an item is then a product); otherwise by
/// whitespace.
pub fn parse_word_list(s: &str, alphabet: &Alphabet) -> Result<Vec<Word>> {
    parse_word_list_inner(s, alphabet).map_err(|m| Error::parse(1, m))
}

fn parse_word_list_inner(s: &str, alphabet: &Alphabet) -> std::result::Result<Vec<Word>, String> {
    let has_comma = split_top_level(s, |c| c == ',').len() > 1;
    let items = if has_comma { split_top_level(s, |c| c == ',') } else { split_top_level(s, char::is_whitespace) };
    items.into_iter().map(|item| parse_word_inner(item, alphabet)).collect()
}

/// Parses a comma-separated subgroup generator list, e.g. `a^3, b, a*b*a`.
/// The empty string denotes the trivial subgroup.
pub fn parse_subgroup(s: &str, alphabet: &Alphabet) -> Result<SubgroupSpec> {
    let items = split_top_level(s, |c| c == ',');
    let gens = items
        .into_iter()
        .map(|item| parse_word_inner(item, alphabet))
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(|m| Error::parse(1, m))?;
    SubgroupSpec::new(gens, alphabet.rank())
}

/// Parses an L-presentation file.
pub fn parse_presentation(text: &str) -> Result<LPresentation> {
    let mut alphabet: Option<Alphabet> = None;
    let mut fixed = Vec::new();
    let mut iterated = Vec::new();
    let mut endos: Vec<(String, FreeEndomorphism)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, rest) = line.split_once(':').ok_or_else(|| Error::parse(lineno, "expected `key: value`"))?;
        let key = key.trim();
        let rest = rest.trim();
        let err = |m: String| Error::parse(lineno, m);

        if key == "generators" {
            if alphabet.is_some() {
                return Err(err("duplicate `generators` line".into()));
            }
            let names: Vec<&str> =
                rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            for n in &names {
                let valid = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
                    && n.chars().all(|c| c.is_alphanumeric() || c == '_');
                if !valid {
                    return Err(err(format!("invalid generator name `{n}`")));
                }
            }
            alphabet = Some(Alphabet::new(names).map_err(|e| err(e.to_string()))?);
            continue;
        }

        let x = alphabet.as_ref().ok_or_else(|| err("`generators` must come first".into()))?;
        if key == "fixed" {
            fixed.extend(parse_word_list_inner(rest, x).map_err(err)?);
        } else if key == "iterated" {
            iterated.extend(parse_word_list_inner(rest, x).map_err(err)?);
        } else if let Some(name) = key.strip_prefix("endomorphism") {
            let name = name.trim();
            if name.is_empty() {
                return Err(err("endomorphism needs a name".into()));
            }
            if endos.iter().any(|(n, _)| n == name) {
                return Err(err(format!("duplicate endomorphism `{name}`")));
            }
            let mut images: Vec<Option<Word>> = vec![None; x.rank()];
            for item in split_top_level(rest, |c| c == ',') {
                let (lhs, rhs) =
                    item.split_once("->").ok_or_else(|| err(format!("expected `x -> w`, found `{item}`")))?;
                let lhs = lhs.trim();
                let g = x.index_of(lhs).ok_or_else(|| err(format!("unknown generator `{lhs}`")))?;
                if images[g].is_some() {
                    return Err(err(format!("generator `{lhs}` mapped twice")));
                }
                images[g] = Some(parse_word_inner(rhs, x).map_err(err)?);
            }
            let images = images
                .into_iter()
                .enumerate()
                .map(|(i, w)| w.ok_or_else(|| err(format!("generator `{}` is not mapped", x.name(i)))))
                .collect::<Result<Vec<_>>>()?;
            endos.push((name.to_string(), FreeEndomorphism::new(images)?));
        } else {
            return Err(err(format!("unknown key `{key}`")));
        }
    }

    let alphabet = alphabet.ok_or_else(|| Error::parse(0, "missing `generators` line"))?;
    LPresentation::new(alphabet, fixed, endos, iterated)
}

/// Resolves `builtin:grigorchuk`, `builtin:basilica` and
/// `builtin:burnside(n,m)`. Returns `None` for anything else.
pub fn builtin(spec: &str) -> Option<Result<LPresentation>> {
    let name = spec.strip_prefix("builtin:")?.trim();
    Some(match name {
        "grigorchuk" => Ok(grigorchuk()),
        "basilica" => Ok(basilica()),
        _ => {
            let args = name.strip_prefix("burnside(").and_then(|r| r.strip_suffix(')'));
            match args.and_then(|a| a.split_once(',')) {
                Some((n, m)) => match (n.trim().parse(), m.trim().parse()) {
                    (Ok(n), Ok(m)) => burnside(n, m),
                    _ => Err(Error::parse(0, format!("bad burnside arguments in `{spec}`"))),
                },
                None => Err(Error::parse(0, format!("unknown builtin `{spec}`"))),
            }
        }
    })
}
