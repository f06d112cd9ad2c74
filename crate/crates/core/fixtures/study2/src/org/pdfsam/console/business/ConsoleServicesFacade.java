package org.pdfsam.console.business;

public class ConsoleServicesFacade {






    public void block0() {

















































    public void block1() {




























        return result89;
}
