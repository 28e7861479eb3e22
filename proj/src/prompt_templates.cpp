// Built-in template bodies. Extraction, base, CoT and scorer bodies are the
// exact template literal values, including their two-space continuation indent.

#include "prompt_templates.hpp"

namespace autoreason::detail {

const std::string_view kAutoReasonExtraction =
    R"tpl(You will formulate Chain of Thought (CoT) reasoning traces.
  CoT is a prompting technique that helps you to think about a problem in a structured way.
  It breaks down a problem into a series of logical reasoning traces.
  
  You will be given a question and using this question you will decompose the question into a series of logical reasoning traces.
  Only write the reasoning traces and do not answer the question yourself.
  
  Here are some examples of CoT reasoning traces:
  
  Question: Did Brazilian jiu-jitsu Gracie founders have at least a baker's dozen of kids between them?
  
  Reasoning traces:
  - Who were the founders of Brazilian jiu-jitsu?
  - What is the number represented by the baker's dozen?
  - How many children do Gracie founders have altogether
  - Is this number bigger than baker's dozen?
  
  Question: Is cow methane safer for environment than cars
  
  Reasoning traces:
  - How much methane is produced by cars annually?
  - How much methane is produced by cows annually?
  - Is methane produced by cows less than methane produced by cars?
  
  Question: ${question}
  
  Reasoning traces:
  )tpl";

const std::string_view kBaseHotpotQa =
    R"tpl(You're an agent. Your job is to answer some questions. Here are the rules:
1. You will be given a question
2. You will answer the question with a short answer, it might yes/no or a short phrase
3. When you know the answer, write it in this format only: "<answer>")tpl";

const std::string_view kBaseStrategyQa =
    R"tpl(You're an agent. Your job is to answer some questions. Here are the rules:
1. You will be given a question
2. You will answer the question with true or false
3. When you know the answer, write it in this format only: "answer")tpl";

// Shared by both datasets; the published HotpotQA and StrategyQA bodies match.
const std::string_view kCot =
    R"tpl(Your job is to answer some questions. Here are some examples of how you should answer:
  
  Q: Do hamsters provide food for any animals?
  Hamsters are prey animals. Prey are food for predators. Thus, hamsters provide food for some animals.
  Answer: yes
  
  Q: Could Brooke Shields succeed at University of Pennsylvania?
  Brooke Shields went to Princeton University. Princeton University is about as academically rigorous as the University of Pennsylvania. Thus, Brooke Shields could also succeed at the University of Pennsylvania.
  Answer: yes
  
  Q: Yes or no: Hydrogen's atomic number squared exceeds number of Spice Girls?
  "Hydrogen has an atomic number of 1. 1 squared is 1. There are 5 Spice Girls. Thus, Hydrogen's atomic number squared is less than 5.
  Answer: no
  
  Q: ${question}
  )tpl";

const std::string_view kScorer =
    R"tpl(Your job is to score an answer's correctness from 0 to 10. You will be given the question, the correct answer, and the answer you need to score.
  0 means the answer is completely wrong, 10 means the answer is completely correct. Explain your reasoning first shortly, and then write the score as a literal number (0 to 10).

  Question: ${question}
  Answer: ${answer}
  Correct Answer: ${correctAnswer}
  Score: )tpl";

const std::string_view kFinalAnswer =
    R"tpl(Answer the question below. First work through each of the listed sub-questions in order, writing a short answer to each one. Then use those answers to reach your conclusion.
${answerFormat}

Question: ${question}

Sub-questions:
${rationales}

Finish with a final line in exactly this format:
Answer: <answer>)tpl";

const std::string_view kAnswerFormatStrategyQa = "The answer must be either true or false.";

const std::string_view kAnswerFormatHotpotQa =
    "The answer must be short: yes/no or a short phrase.";

}  // namespace autoreason::detail
