//! Recursive-descent parser over the token stream.

use super::lexer::{lex, SpannedTok, Tok};
use super::{
    MoveArgs, ParseError, ParseErrorKind, PolicyProgram, PoseExpr, Span, SpannedStatement,
    Statement,
};
use crate::control::{CompareOp, ConditionExpr, ConjunctionOp, StatusVar};

pub fn parse(text: &str) -> Result<PolicyProgram, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0 };
    let mut statements = Vec::new();
    while !p.at_end() {
        let span = p.current_span();
        let statement = p.statement()?;
        p.expect(&Tok::Semi, "`;` after statement")?;
        statements.push(SpannedStatement { statement, span });
    }
    Ok(PolicyProgram { statements })
}

struct Parser {
    toks: Vec<SpannedTok>,
    pos: usize,
}

impl Parser {
    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn current_span(&self) -> Span {
        self.toks
            .get(self.pos)
            .map(|t| t.span)
            .unwrap_or(Span { line: 0, col: 0 })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn bump(&mut self) -> Option<&SpannedTok> {
        let t = self.toks.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        let span = if self.at_end() {
            self.toks.last().map(|t| t.span).unwrap_or(Span { line: 1, col: 1 })
        } else {
            self.current_span()
        };
        ParseError {
            kind: ParseErrorKind::Syntax,
            span,
            message: message.into(),
        }
    }

    fn expect(&mut self, tok: &Tok, what: &str) -> Result<(), ParseError> {
        if self.peek() == Some(tok) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected {what}")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                self.pos += 1;
                Ok(name)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn number(&mut self, what: &str) -> Result<f64, ParseError> {
        match self.peek() {
            Some(Tok::Number(v)) => {
                let v = *v;
                self.pos += 1;
                Ok(v)
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn statement(&mut self) -> Result<Statement, ParseError> {
        let name = self.ident("a statement")?;
        match name.as_str() {
            "move_compliant" => {
                self.expect(&Tok::LParen, "`(`")?;
                let pose = self.pose_expr()?;
                let args = self.move_args()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::CompliantMove { pose, args })
            }
            "move_ptp" => {
                self.expect(&Tok::LParen, "`(`")?;
                let pose = self.pose_expr()?;
                if self.peek() == Some(&Tok::Comma) {
                    return Err(self.error("move_ptp takes only a pose"));
                }
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::PtpMove { pose })
            }
            "move_gripper" => {
                self.expect(&Tok::LParen, "`(`")?;
                let percent = self.number("a percentage")?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::Gripper { percent })
            }
            "grasp_cable" => {
                self.expect(&Tok::LParen, "`(`")?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::GraspCable)
            }
            "pick_up" => {
                self.expect(&Tok::LParen, "`(`")?;
                let object = self.ident("an object name")?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::PickUp { object })
            }
            "estimate_pose" => {
                self.expect(&Tok::LParen, "`(`")?;
                let object = self.ident("an object name")?;
                self.expect(&Tok::Comma, "`,`")?;
                let binding = self.ident("a binding name")?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(Statement::EstimatePose { object, binding })
            }
            "let" => {
                let name = self.ident("a binding name")?;
                self.expect(&Tok::Assign, "`=`")?;
                let pose = self.pose_expr()?;
                Ok(Statement::LetPose { name, pose })
            }
            other => Err(self.error(format!("unknown statement `{other}`"))),
        }
    }

    fn move_args(&mut self) -> Result<MoveArgs, ParseError> {
        let mut args = MoveArgs::default();
        while self.peek() == Some(&Tok::Comma) {
            self.pos += 1;
            let key = self.ident("a keyword argument")?;
            self.expect(&Tok::Assign, "`=`")?;
            let duplicate = match key.as_str() {
                "stiffness" => args.stiffness.replace(self.vec6()?).is_some(),
                "impedance" => args.impedance.replace(self.vec6()?).is_some(),
                "inertia" => args.inertia.replace(self.vec6()?).is_some(),
                "until" => args.until.replace(self.condition()?).is_some(),
                "timeout" => args.timeout.replace(self.number("a timeout")?).is_some(),
                "tare" => args.tare.replace(self.boolean()?).is_some(),
                other => return Err(self.error(format!("unknown keyword `{other}`"))),
            };
            if duplicate {
                return Err(self.error(format!("duplicate keyword `{key}`")));
            }
        }
        Ok(args)
    }

    fn boolean(&mut self) -> Result<bool, ParseError> {
        let word = self.ident("`true` or `false`")?;
        match word.as_str() {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(self.error("expected `true` or `false`")),
        }
    }

    fn vec3(&mut self) -> Result<[f64; 3], ParseError> {
        self.expect(&Tok::LBracket, "`[`")?;
        let a = self.number("a component")?;
        self.expect(&Tok::Comma, "`,`")?;
        let b = self.number("a component")?;
        self.expect(&Tok::Comma, "`,`")?;
        let c = self.number("a component")?;
        self.expect(&Tok::RBracket, "`]`")?;
        Ok([a, b, c])
    }

    fn vec6(&mut self) -> Result<[f64; 6], ParseError> {
        self.expect(&Tok::LBracket, "`[`")?;
        let mut out = [0.0; 6];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(&Tok::Comma, "`,`")?;
            }
            *slot = self.number("a component")?;
        }
        self.expect(&Tok::RBracket, "`]`")?;
        Ok(out)
    }

    fn pose_expr(&mut self) -> Result<PoseExpr, ParseError> {
        let mut expr = self.pose_atom()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let rhs = self.pose_atom()?;
            expr = PoseExpr::Multiply(Box::new(expr), Box::new(rhs));
        }
        Ok(expr)
    }

    fn pose_atom(&mut self) -> Result<PoseExpr, ParseError> {
        let name = self.ident("a pose expression")?;
        match name.as_str() {
            "pose" => {
                self.expect(&Tok::LParen, "`(`")?;
                let v = self.number("a pose index")?;
                self.expect(&Tok::RParen, "`)`")?;
                if v.fract() != 0.0 || !(0.0..=u32::MAX as f64).contains(&v) {
                    return Err(self.error(format!("pose index must be a small integer, got {v}")));
                }
                Ok(PoseExpr::Named(v as u32))
            }
            "pose_rpy" => {
                self.expect(&Tok::LParen, "`(`")?;
                let translation = self.vec3()?;
                self.expect(&Tok::Comma, "`,`")?;
                let rotation = self.vec3()?;
                self.expect(&Tok::RParen, "`)`")?;
                Ok(PoseExpr::Rpy {
                    translation,
                    rotation,
                })
            }
            _ => Ok(PoseExpr::Ident(name)),
        }
    }

    fn condition(&mut self) -> Result<ConditionExpr, ParseError> {
        let name = self.ident("a condition")?;
        match name.as_str() {
            "any" | "all" => {
                let op = if name == "any" {
                    ConjunctionOp::AnyOf
                } else {
                    ConjunctionOp::AllOf
                };
                self.expect(&Tok::LParen, "`(`")?;
                let mut children = vec![self.condition()?];
                while self.peek() == Some(&Tok::Comma) {
                    self.pos += 1;
                    children.push(self.condition()?);
                }
                self.expect(&Tok::RParen, "`)`")?;
                Ok(ConditionExpr::Conjunction { op, children })
            }
            var_name => {
                let variable = StatusVar::parse(var_name).ok_or_else(|| {
                    self.error(format!(
                        "unknown state variable `{var_name}`; one of x_force, y_force, z_force, translation_error, rotation_error"
                    ))
                })?;
                let op = match self.bump().map(|t| t.tok.clone()) {
                    Some(Tok::Ge) => CompareOp::Ge,
                    Some(Tok::Le) => CompareOp::Le,
                    Some(Tok::ApproxEq) => CompareOp::ApproxEq,
                    Some(Tok::NotApproxEq) => CompareOp::ApproxNeq,
                    _ => return Err(self.error("expected a comparator: >=, <=, ~= or !~=")),
                };
                let value = self.number("a threshold")?;
                Ok(ConditionExpr::Comparison {
                    op,
                    variable,
                    value,
                })
            }
        }
    }
}
