use std::collections::HashSet;

use super::lexer::{tokenize, Token, TokenKind};
use super::{
    ActionDef, Axis, Condition, CoordBase, CoordExpr, GameDomain, GameInstance, InitEntry,
    ParseError, Predicate, Side, Span, SubCondition,
};

/// Parse a domain file (`#blackactions ... #whiteactions ...`).
pub fn parse_domain(text: &str) -> Result<GameDomain, ParseError> {
    let mut p = Parser::new(text, Context::Domain)?;
    p.expect_directive(&["#blackactions"])?;
    let black_span = p.last_span;
    let black_actions = p.actions()?;
    p.expect_directive(&["#whiteactions"])?;
    let white_span = p.last_span;
    let white_actions = p.actions()?;
    p.expect_end()?;

    for (side, actions, span) in [
        (Side::Black, &black_actions, black_span),
        (Side::White, &white_actions, white_span),
    ] {
        if actions.is_empty() {
            return Err(ParseError::Semantic {
                span,
                message: format!("{side} has no actions"),
            });
        }
    }
    Ok(GameDomain {
        black_actions: black_actions.into_iter().map(|(a, _)| a).collect(),
        white_actions: white_actions.into_iter().map(|(a, _)| a).collect(),
    })
}

/// Parse a problem file (`#boardsize ... #init ... #depth ... goals`).
pub fn parse_problem(text: &str) -> Result<GameInstance, ParseError> {
    let mut p = Parser::new(text, Context::Problem)?;
    p.expect_directive(&["#boardsize"])?;
    let (width, _) = p.positive_int("board width")?;
    let (height, _) = p.positive_int("board height")?;

    p.expect_directive(&["#init"])?;
    let mut init = Vec::new();
    let mut seen = HashSet::new();
    if p.peek_is(&TokenKind::LParen) {
        p.bump();
        while !p.peek_is(&TokenKind::RParen) {
            let (pred, span) = p.predicate()?;
            let side = match pred {
                Predicate::Black => Side::Black,
                Predicate::White => Side::White,
                Predicate::Open => {
                    return Err(ParseError::Semantic {
                        span,
                        message: "init lists only black and white positions".into(),
                    })
                }
            };
            p.expect(TokenKind::LParen)?;
            let (x, _) = p.positive_int("init column")?;
            p.expect(TokenKind::Comma)?;
            let (y, _) = p.positive_int("init row")?;
            p.expect(TokenKind::RParen)?;
            if x > width || y > height {
                return Err(ParseError::Semantic {
                    span,
                    message: format!(
                        "init position ({x},{y}) is outside the {width}x{height} board"
                    ),
                });
            }
            if !seen.insert((x, y)) {
                return Err(ParseError::Semantic {
                    span,
                    message: format!("init position ({x},{y}) is listed twice"),
                });
            }
            init.push(InitEntry { side, x, y });
        }
        p.expect(TokenKind::RParen)?;
    }

    p.expect_directive(&["#depth"])?;
    let (depth, _) = p.positive_int("depth")?;

    p.expect_directive(&["#blackgoals", "#blackgoal"])?;
    let black_goals = p.goal_list()?;
    p.expect_directive(&["#whitegoals", "#whitegoal"])?;
    let white_goals = p.goal_list()?;
    p.expect_end()?;

    Ok(GameInstance {
        width,
        height,
        init,
        black_goals,
        white_goals,
        depth,
    })
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Context {
    Domain,
    Problem,
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    context: Context,
    last_span: Span,
    end_span: Span,
}

impl Parser {
    fn new(text: &str, context: Context) -> Result<Self, ParseError> {
        let tokens = tokenize(text)?;
        let lines = text.lines().count().max(1);
        let end_span = Span {
            line: lines,
            column: text.lines().last().map_or(1, |l| l.chars().count() + 1),
        };
        Ok(Parser {
            tokens,
            pos: 0,
            context,
            last_span: Span { line: 1, column: 1 },
            end_span,
        })
    }

    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_is(&self, kind: &TokenKind) -> bool {
        self.peek().is_some_and(|t| &t.kind == kind)
    }

    fn bump(&mut self) -> Option<Token> {
        let tok = self.tokens.get(self.pos).cloned();
        if let Some(t) = &tok {
            self.last_span = t.span;
            self.pos += 1;
        }
        tok
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::Syntax {
                span: t.span,
                message: format!("expected {wanted}, found {}", t.kind.describe()),
            },
            None => ParseError::Syntax {
                span: self.end_span,
                message: format!("expected {wanted}, found end of input"),
            },
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Span, ParseError> {
        if self.peek_is(&kind) {
            Ok(self.bump().expect("peeked").span)
        } else {
            Err(self.unexpected(&kind.describe()))
        }
    }

    fn expect_keyword(&mut self, keyword: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Keyword(k),
                ..
            }) if k == keyword => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("'{keyword}'"))),
        }
    }

    fn expect_directive(&mut self, names: &[&str]) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Directive(d),
                ..
            }) if names.contains(&d.as_str()) => {
                self.bump();
                Ok(())
            }
            _ => Err(self.unexpected(&format!("'{}'", names[0]))),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected("end of input")),
        }
    }

    fn at_directive(&self) -> bool {
        matches!(
            self.peek(),
            None | Some(Token {
                kind: TokenKind::Directive(_),
                ..
            })
        )
    }

    fn positive_int(&mut self, what: &str) -> Result<(u32, Span), ParseError> {
        match self.peek().cloned() {
            Some(Token {
                kind: TokenKind::Int(v),
                span,
            }) => {
                self.bump();
                if v == 0 {
                    return Err(ParseError::Semantic {
                        span,
                        message: format!("{what} must be positive"),
                    });
                }
                let v = u32::try_from(v).map_err(|_| ParseError::Semantic {
                    span,
                    message: format!("{what} {v} is too large"),
                })?;
                Ok((v, span))
            }
            _ => Err(self.unexpected(&format!("{what} (positive integer)"))),
        }
    }

    fn actions(&mut self) -> Result<Vec<(ActionDef, Span)>, ParseError> {
        let mut actions: Vec<(ActionDef, Span)> = Vec::new();
        while !self.at_directive() {
            self.expect_keyword(":action")?;
            let (name, span) = match self.bump() {
                Some(Token {
                    kind: TokenKind::Ident(name),
                    span,
                }) => (name, span),
                _ => {
                    self.pos -= 1;
                    return Err(self.unexpected("action name"));
                }
            };
            if actions.iter().any(|(a, _)| a.name == name) {
                return Err(ParseError::Semantic {
                    span,
                    message: format!("duplicate action name '{name}'"),
                });
            }
            self.expect_keyword(":parameters")?;
            self.expect(TokenKind::LParen)?;
            self.expect(TokenKind::Param(Axis::X))?;
            self.expect(TokenKind::Comma)?;
            self.expect(TokenKind::Param(Axis::Y))?;
            self.expect(TokenKind::RParen)?;
            self.expect_keyword(":precondition")?;
            let pre = self.condition()?;
            self.expect_keyword(":effect")?;
            let eff = self.condition()?;
            actions.push((ActionDef { name, pre, eff }, span));
        }
        Ok(actions)
    }

    fn goal_list(&mut self) -> Result<Vec<Condition>, ParseError> {
        let mut goals = Vec::new();
        while !self.at_directive() {
            goals.push(self.condition()?);
        }
        Ok(goals)
    }

    fn condition(&mut self) -> Result<Condition, ParseError> {
        self.expect(TokenKind::LParen)?;
        let mut subs = Vec::new();
        while !self.peek_is(&TokenKind::RParen) {
            subs.push(self.sub_condition()?);
        }
        self.expect(TokenKind::RParen)?;
        Ok(Condition { subs })
    }

    fn sub_condition(&mut self) -> Result<SubCondition, ParseError> {
        let negated = matches!(
            self.peek(),
            Some(Token { kind: TokenKind::Ident(s), .. }) if s == "NOT"
        );
        if negated {
            self.bump();
            self.expect(TokenKind::LParen)?;
        }
        let (predicate, _) = self.predicate()?;
        self.expect(TokenKind::LParen)?;
        let x = self.coord(Axis::X)?;
        self.expect(TokenKind::Comma)?;
        let y = self.coord(Axis::Y)?;
        self.expect(TokenKind::RParen)?;
        if negated {
            self.expect(TokenKind::RParen)?;
        }
        Ok(SubCondition {
            predicate,
            x,
            y,
            negated,
        })
    }

    fn predicate(&mut self) -> Result<(Predicate, Span), ParseError> {
        let pred = match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                span,
            }) => match s.as_str() {
                "black" => Some((Predicate::Black, *span)),
                "white" => Some((Predicate::White, *span)),
                "open" => Some((Predicate::Open, *span)),
                _ => None,
            },
            _ => None,
        };
        match pred {
            Some(p) => {
                self.bump();
                Ok(p)
            }
            None => Err(self.unexpected("predicate (open, white or black)")),
        }
    }

    fn coord(&mut self, axis: Axis) -> Result<CoordExpr, ParseError> {
        let axis_name = match axis {
            Axis::X => "x",
            Axis::Y => "y",
        };
        let tok = self
            .peek()
            .cloned()
            .ok_or_else(|| self.unexpected("coordinate"))?;
        let cross_axis = |span| ParseError::Semantic {
            span,
            message: format!("expression for the {axis_name} coordinate refers to the other axis"),
        };
        match tok.kind {
            TokenKind::Param(a) => {
                self.bump();
                if a != axis {
                    return Err(cross_axis(tok.span));
                }
                let sign = if self.peek_is(&TokenKind::Plus) {
                    1
                } else if self.peek_is(&TokenKind::Minus) {
                    -1
                } else {
                    return Ok(CoordExpr::var(axis, 0));
                };
                self.bump();
                match self.peek().cloned() {
                    Some(Token {
                        kind: TokenKind::Int(k),
                        span,
                    }) => {
                        self.bump();
                        let k = i32::try_from(k).map_err(|_| ParseError::Semantic {
                            span,
                            message: format!("offset {k} is too large"),
                        })?;
                        Ok(CoordExpr::var(axis, sign * k))
                    }
                    _ => Err(self.unexpected("integer offset")),
                }
            }
            TokenKind::Int(v) => {
                self.bump();
                if self.context == Context::Domain {
                    return Err(ParseError::Semantic {
                        span: tok.span,
                        message: "absolute integer coordinates are not allowed in a domain file"
                            .into(),
                    });
                }
                if v == 0 {
                    return Err(ParseError::Semantic {
                        span: tok.span,
                        message: "board coordinates are 1-based".into(),
                    });
                }
                let v = u32::try_from(v).map_err(|_| ParseError::Semantic {
                    span: tok.span,
                    message: format!("coordinate {v} is too large"),
                })?;
                Ok(CoordExpr::constant(v))
            }
            TokenKind::Ident(ref s) => {
                let (base, base_axis) = match s.as_str() {
                    "xmin" => (CoordBase::XMin, Axis::X),
                    "xmax" => (CoordBase::XMax, Axis::X),
                    "ymin" => (CoordBase::YMin, Axis::Y),
                    "ymax" => (CoordBase::YMax, Axis::Y),
                    _ => return Err(self.unexpected("coordinate")),
                };
                self.bump();
                if base_axis != axis {
                    return Err(cross_axis(tok.span));
                }
                Ok(CoordExpr { base, offset: 0 })
            }
            _ => Err(self.unexpected("coordinate")),
        }
    }
}
