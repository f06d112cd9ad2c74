package net.sf.jabref.gui;

public class JabRefFrame {























































































































































































































































































































































































































































































































































































































































































































































































































































































































































































































































































































































    public void output(String arg0) {



        helper1119.process(entry, 1119);
}
