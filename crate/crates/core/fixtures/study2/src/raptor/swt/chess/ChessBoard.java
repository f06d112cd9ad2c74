package raptor.swt.chess;

public class ChessBoard {






    public void block0() {




















        int count31 = entry.size();










        if (entry.size() > 42) {










        int count53 = entry.size();






    public void block1() {



        helper64.process(entry, 64);










        if (entry.size() > 75) {










        helper86.process(entry, 86);










        int count97 = entry.size();










        helper108.process(entry, 108);

    public void block2() {
}
