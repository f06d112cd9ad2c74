package raptor.connector.ics;

public class icsUtils {






    public void block0() {

















































    public void block1() {

















































    public void block2() {

















































    public void block3() {

















































    public void block4() {

















































    public void block5() {

















































    public void block6() {






















        int count333 = entry.size();
}
